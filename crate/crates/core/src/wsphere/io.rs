//! Binary sphere files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "CWS1"
//! u32 N, u32 K, u32 r, u32 shell_count
//! shell_count × (u32 weight, u32 count)
//! members, shell-major, each as ceil(N/64) u64 words (binlin layout)
//! u64 CRC-64/XZ of every preceding byte
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crc::{Crc, CRC_64_XZ};

use super::CodeWeightSphere;
use crate::binlin::{words_for, BitVector};
use crate::error::{Error, Result};

pub const SPHERE_MAGIC: &[u8; 4] = b"CWS1";

const CHECKSUM: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

fn encode(sphere: &CodeWeightSphere) -> Vec<u8> {
    let words = words_for(sphere.n());
    let mut buf = Vec::with_capacity(20 + 8 * sphere.shells().len() + 8 * words * sphere.len() + 8);
    buf.extend_from_slice(SPHERE_MAGIC);
    for v in [
        sphere.n(),
        sphere.k(),
        sphere.radius(),
        sphere.shells().len(),
    ] {
        buf.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for s in sphere.shells() {
        buf.extend_from_slice(&(s.weight as u32).to_le_bytes());
        buf.extend_from_slice(&(s.count as u32).to_le_bytes());
    }
    for m in sphere.members() {
        for w in m.words() {
            buf.extend_from_slice(&w.to_le_bytes());
        }
    }
    let sum = CHECKSUM.checksum(&buf);
    buf.extend_from_slice(&sum.to_le_bytes());
    buf
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::MalformedSphere("file truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<usize> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
    }

    fn u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
}

fn decode(bytes: &[u8]) -> Result<CodeWeightSphere> {
    if bytes.len() < SPHERE_MAGIC.len() + 16 + 8 {
        return Err(Error::MalformedSphere("file truncated".into()));
    }
    if &bytes[..4] != SPHERE_MAGIC {
        return Err(Error::MalformedSphere("bad magic".into()));
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(trailer.try_into().expect("8 bytes"));
    let computed = CHECKSUM.checksum(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    let mut cur = Cursor {
        bytes: body,
        pos: 4,
    };
    let n = cur.u32()?;
    let k = cur.u32()?;
    let r = cur.u32()?;
    let shell_count = cur.u32()?;
    if n == 0 || shell_count != r + 1 {
        return Err(Error::MalformedSphere(format!(
            "inconsistent header (N = {n}, r = {r}, shells = {shell_count})"
        )));
    }
    let mut headers = Vec::with_capacity(shell_count);
    for _ in 0..shell_count {
        headers.push((cur.u32()?, cur.u32()?));
    }
    let words = words_for(n);
    let mut shells = Vec::with_capacity(shell_count);
    for (weight, count) in headers {
        let mut members = Vec::with_capacity(count);
        for _ in 0..count {
            let w = (0..words).map(|_| cur.u64()).collect::<Result<Vec<_>>>()?;
            members.push(
                BitVector::from_words(n, w).map_err(|e| Error::MalformedSphere(e.to_string()))?,
            );
        }
        shells.push((weight, members));
    }
    if cur.pos != body.len() {
        return Err(Error::MalformedSphere(format!(
            "{} trailing bytes before checksum",
            body.len() - cur.pos
        )));
    }
    CodeWeightSphere::from_shells(n, k, shells).map_err(|e| Error::MalformedSphere(e.to_string()))
}

pub fn write_sphere(sphere: &CodeWeightSphere, mut out: impl Write) -> Result<()> {
    out.write_all(&encode(sphere))?;
    Ok(())
}

pub fn read_sphere(mut input: impl Read) -> Result<CodeWeightSphere> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn save_sphere(sphere: &CodeWeightSphere, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode(sphere))?;
    Ok(())
}

pub fn load_sphere(path: impl AsRef<Path>) -> Result<CodeWeightSphere> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingSphere(path.to_path_buf()));
    }
    decode(&fs::read(path)?)
}
