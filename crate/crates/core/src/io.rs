//! Image file output: 8-bit PPM (P6) for viewing and a raw 32-bit float
//! dump for exact-equality comparisons.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use crate::geom::Rgba;
use crate::render::Image;
use crate::scalar::Real;

/// Write an 8-bit binary PPM. Channels are clamped to [0,1] and scaled.
pub fn write_ppm<S: Real>(img: &Image<S>, path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P6\n{} {}\n255\n", img.width, img.height)?;
    let q = |v: S| (v.as_f64().clamp(0.0, 1.0) * 255.0).round() as u8;
    for p in &img.pixels {
        w.write_all(&[q(p.r), q(p.g), q(p.b)])?;
    }
    Ok(())
}

const F32_DUMP_MAGIC: &[u8; 4] = b"CTF1";

/// Raw dump: magic, u32 width, u32 height (little endian), then RGBA f32
/// little-endian per pixel. Lossless for f32 renders.
pub fn write_f32_dump<S: Real>(img: &Image<S>, path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(F32_DUMP_MAGIC)?;
    w.write_all(&img.width.to_le_bytes())?;
    w.write_all(&img.height.to_le_bytes())?;
    for p in &img.pixels {
        for c in 0..4 {
            w.write_all(&(p.channel(c).as_f64() as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_f32_dump(path: &Path) -> io::Result<Image<f32>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 12 || &bytes[..4] != F32_DUMP_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "not a CTF1 dump"));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    let expect = 12 + (width * height) as usize * 16;
    if bytes.len() != expect {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "truncated dump"));
    }
    let mut pixels = Vec::with_capacity((width * height) as usize);
    for chunk in bytes[12..].chunks_exact(16) {
        let f = |o: usize| f32::from_le_bytes(chunk[o..o + 4].try_into().unwrap());
        pixels.push(Rgba::new(f(0), f(4), f(8), f(12)));
    }
    Ok(Image {
        width,
        height,
        pixels,
    })
}
