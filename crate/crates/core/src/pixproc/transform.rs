//! Geometric augmentation by nearest-neighbour inverse mapping.
//!
//! Every transform is expressed as an affine map from output pixel
//! coordinates to source coordinates, pivoting on the image center
//! `((w - 1) / 2, (h - 1) / 2)`. The source sample is taken at
//! `floor(coordinate + 0.5)`; positions outside the source take the fill
//! value. Output dimensions always equal input dimensions.

use super::Pixmap;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    HFlip,
    VFlip,
    /// Counter-clockwise rotation as displayed, in degrees.
    Rotate { degrees: f64 },
    /// Translation by a fraction of the width and height; positive moves
    /// content right and down.
    Shift { dx: f64, dy: f64 },
    /// Scale about the center; factors above 1 enlarge the content.
    Zoom { factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub kind: TransformKind,
    /// Sample value used where the source has no data.
    pub fill: u8,
}

impl TransformSpec {
    pub fn new(kind: TransformKind) -> Self {
        TransformSpec { kind, fill: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            TransformKind::Zoom { factor } if !(factor.is_finite() && factor > 0.0) => {
                Err(Error::Invalid(format!("zoom factor {factor} must be positive")))
            }
            TransformKind::Shift { dx, dy } if !(dx.abs() < 1.0 && dy.abs() < 1.0) => {
                Err(Error::Invalid(format!("shift ({dx}, {dy}) must be below 1 in magnitude")))
            }
            TransformKind::Rotate { degrees } if !degrees.is_finite() => {
                Err(Error::Invalid("rotation angle must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// `src = (a*x + b*y + tx, c*x + d*y + ty)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Affine {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    tx: f64,
    ty: f64,
}

impl Affine {
    const IDENTITY: Affine = Affine {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
        tx: 0.0,
        ty: 0.0,
    };

    /// Linear part `[[a, b], [c, d]]` applied about the center.
    fn about_center(a: f64, b: f64, c: f64, d: f64, w: usize, h: usize) -> Affine {
        let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
        Affine {
            a,
            b,
            c,
            d,
            tx: cx - (a * cx + b * cy),
            ty: cy - (c * cx + d * cy),
        }
    }

    fn inverse_map(kind: TransformKind, w: usize, h: usize) -> Affine {
        match kind {
            TransformKind::HFlip => Affine {
                a: -1.0,
                tx: w as f64 - 1.0,
                ..Self::IDENTITY
            },
            TransformKind::VFlip => Affine {
                d: -1.0,
                ty: h as f64 - 1.0,
                ..Self::IDENTITY
            },
            TransformKind::Rotate { degrees } => {
                let (s, c) = snapped_sin_cos(degrees);
                // Content turns counter-clockwise on screen (y grows downward).
                Self::about_center(c, -s, s, c, w, h)
            }
            TransformKind::Shift { dx, dy } => Affine {
                tx: -dx * w as f64,
                ty: -dy * h as f64,
                ..Self::IDENTITY
            },
            TransformKind::Zoom { factor } => {
                let k = 1.0 / factor;
                Self::about_center(k, 0.0, 0.0, k, w, h)
            }
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`, to coordinates.
    fn after(self, other: Affine) -> Affine {
        Affine {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
            tx: self.a * other.tx + self.b * other.ty + self.tx,
            ty: self.c * other.tx + self.d * other.ty + self.ty,
        }
    }
}

/// `sin`/`cos` with values within 1e-12 of 0 or ±1 snapped, so quarter
/// turns map pixel centers exactly.
fn snapped_sin_cos(degrees: f64) -> (f64, f64) {
    let snap = |v: f64| {
        for t in [-1.0, 0.0, 1.0] {
            if (v - t).abs() < 1e-12 {
                return t;
            }
        }
        v
    };
    let (s, c) = degrees.to_radians().sin_cos();
    (snap(s), snap(c))
}

fn resample(img: &Pixmap, map: Affine, fill: u8) -> Pixmap {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let mut data = Vec::with_capacity(w * h * ch);
    for y in 0..h {
        for x in 0..w {
            let (xf, yf) = (x as f64, y as f64);
            let sx = (map.a * xf + map.b * yf + map.tx + 0.5).floor();
            let sy = (map.c * xf + map.d * yf + map.ty + 0.5).floor();
            if sx >= 0.0 && sy >= 0.0 && sx < w as f64 && sy < h as f64 {
                data.extend_from_slice(img.pixel(sx as usize, sy as usize));
            } else {
                data.extend(std::iter::repeat_n(fill, ch));
            }
        }
    }
    Pixmap::new(w, h, ch, data).expect("dimensions preserved")
}

pub fn apply_transform(img: &Pixmap, spec: &TransformSpec) -> Result<Pixmap> {
    spec.validate()?;
    Ok(resample(img, Affine::inverse_map(spec.kind, img.width(), img.height()), spec.fill))
}

/// Random augmentation parameters. The defaults are flips with
/// probability 1/2, rotation within ±20°, zoom within [0.9, 1.1] and shift
/// within ±0.1 of each dimension, on a black background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentationPolicy {
    pub hflip_probability: f64,
    pub vflip_probability: f64,
    pub max_rotation_degrees: f64,
    pub zoom_range: (f64, f64),
    pub max_shift: f64,
    pub fill: u8,
}

impl Default for AugmentationPolicy {
    fn default() -> Self {
        AugmentationPolicy {
            hflip_probability: 0.5,
            vflip_probability: 0.5,
            max_rotation_degrees: 20.0,
            zoom_range: (0.9, 1.1),
            max_shift: 0.1,
            fill: 0,
        }
    }
}

impl AugmentationPolicy {
    /// Draws a transform sequence: optional horizontal flip, optional
    /// vertical flip, rotation, zoom, shift, in that order. Each uniform
    /// draw is consumed whether or not the transform ends up trivial.
    pub fn sample(&self, seed: u64) -> Result<Vec<TransformSpec>> {
        let (zlo, zhi) = self.zoom_range;
        if !(zlo > 0.0 && zlo <= zhi) || !(0.0..1.0).contains(&self.max_shift) {
            return Err(Error::Invalid("invalid augmentation ranges".into()));
        }
        let mut rng = SeededRng::new(seed);
        let hflip = rng.uniform() < self.hflip_probability;
        let vflip = rng.uniform() < self.vflip_probability;
        let degrees = (2.0 * rng.uniform() - 1.0) * self.max_rotation_degrees;
        let factor = zlo + rng.uniform() * (zhi - zlo);
        let dx = (2.0 * rng.uniform() - 1.0) * self.max_shift;
        let dy = (2.0 * rng.uniform() - 1.0) * self.max_shift;

        let mut out = Vec::with_capacity(5);
        if hflip {
            out.push(TransformKind::HFlip);
        }
        if vflip {
            out.push(TransformKind::VFlip);
        }
        out.push(TransformKind::Rotate { degrees });
        out.push(TransformKind::Zoom { factor });
        out.push(TransformKind::Shift { dx, dy });
        Ok(out
            .into_iter()
            .map(|kind| TransformSpec { kind, fill: self.fill })
            .collect())
    }
}

/// Applies a transform sequence with a single resampling pass.
pub fn apply_sequence(img: &Pixmap, specs: &[TransformSpec], fill: u8) -> Result<Pixmap> {
    let mut map = Affine::IDENTITY;
    for spec in specs {
        spec.validate()?;
        map = map.after(Affine::inverse_map(spec.kind, img.width(), img.height()));
    }
    Ok(resample(img, map, fill))
}

/// Samples `policy` with `seed` and applies the result.
pub fn augment(img: &Pixmap, policy: &AugmentationPolicy, seed: u64) -> Result<Pixmap> {
    apply_sequence(img, &policy.sample(seed)?, policy.fill)
}
