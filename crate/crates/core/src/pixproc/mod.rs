//! Pixel geometry for preprocessing: center cropping and the augmentation
//! transforms (flips, rotation, shift, zoom), on 8-bit gray or RGB buffers.

mod pnm;
mod transform;

use crate::error::{Error, Result};

pub use pnm::{read_pnm, write_pnm};
pub use transform::{apply_sequence, apply_transform, augment, AugmentationPolicy, TransformKind, TransformSpec};

/// Row-major, channel-interleaved 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pixmap {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Pixmap {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid("pixmap dimensions must be positive".into()));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Invalid(format!("unsupported channel count {channels}")));
        }
        if data.len() != width * height * channels {
            return Err(Error::Invalid(format!(
                "{}x{}x{} pixmap needs {} samples, got {}",
                width,
                height,
                channels,
                width * height * channels,
                data.len()
            )));
        }
        Ok(Pixmap {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds a pixmap by evaluating `f(x, y, channel)` for every sample.
    pub fn from_fn(width: usize, height: usize, channels: usize, f: impl Fn(usize, usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }
}

/// Offset of a centered `target`-sized window inside `source`.
pub fn crop_offset(source: usize, target: usize) -> usize {
    (source - target) / 2
}

/// Extracts the centered `target_w x target_h` window without resampling.
pub fn center_crop(img: &Pixmap, target_w: usize, target_h: usize) -> Result<Pixmap> {
    if target_w == 0 || target_h == 0 || target_w > img.width || target_h > img.height {
        return Err(Error::Invalid(format!(
            "cannot crop {}x{} to {target_w}x{target_h}",
            img.width, img.height
        )));
    }
    let (ox, oy) = (crop_offset(img.width, target_w), crop_offset(img.height, target_h));
    let row = target_w * img.channels;
    let mut data = Vec::with_capacity(row * target_h);
    for y in oy..oy + target_h {
        let start = (y * img.width + ox) * img.channels;
        data.extend_from_slice(&img.data[start..start + row]);
    }
    Pixmap::new(target_w, target_h, img.channels, data)
}
