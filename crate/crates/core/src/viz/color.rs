use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::VizError;
use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub fn channels(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl FromStr for Rgb {
    type Err = VizError;

    /// Accepts `#RRGGBB` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VizError::BadHex(s.to_string());
        let hex = s.strip_prefix('#').ok_or_else(bad)?;
        if hex.len() != 6 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let ch = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
        Ok(Rgb::new(ch(0)?, ch(2)?, ch(4)?))
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Two-color linear gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScheme {
    pub start: Rgb,
    pub end: Rgb,
}

/// The five gradients the legend cycles through, in order.
pub const BUILTIN_SCHEMES: [ColorScheme; 5] = [
    ColorScheme {
        start: Rgb::new(0x00, 0x00, 0x00),
        end: Rgb::new(0xFF, 0xFF, 0xFF),
    },
    ColorScheme {
        start: Rgb::new(0x00, 0x00, 0xFF),
        end: Rgb::new(0xFF, 0xFF, 0x00),
    },
    ColorScheme {
        start: Rgb::new(0xFF, 0x7F, 0x00),
        end: Rgb::new(0x00, 0xFF, 0xFF),
    },
    ColorScheme {
        start: Rgb::new(0x7E, 0x1E, 0x9C),
        end: Rgb::new(0xFF, 0xFF, 0x00),
    },
    ColorScheme {
        start: Rgb::new(0xA5, 0x2A, 0x2A),
        end: Rgb::new(0xAD, 0xD8, 0xE6),
    },
];

/// Blue to yellow.
pub const DEFAULT_SCHEME: usize = 1;

pub fn scheme(index: usize) -> Result<ColorScheme, VizError> {
    BUILTIN_SCHEMES
        .get(index)
        .copied()
        .ok_or(VizError::UnknownScheme(index))
}

/// Per-channel linear interpolation from `scheme.start` at `min` to
/// `scheme.end` at `max`, rounding half up. Values outside the range are
/// clamped; a degenerate range maps to the start color.
pub fn map_color<T: Scalar>(value: T, min: T, max: T, scheme: &ColorScheme) -> Rgb {
    if max.partial_cmp(&min) != Some(std::cmp::Ordering::Greater) || value.is_nan() {
        return scheme.start;
    }
    let t = ((value - min) / (max - min)).max(T::zero()).min(T::one());
    let t = t.to_f64().unwrap_or(0.0);
    let mix = |a: u8, b: u8| {
        let v = a as f64 + (b as f64 - a as f64) * t;
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    };
    Rgb::new(
        mix(scheme.start.r, scheme.end.r),
        mix(scheme.start.g, scheme.end.g),
        mix(scheme.start.b, scheme.end.b),
    )
}

fn linearize(channel: u8) -> f64 {
    let v = channel as f64 / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// WCAG relative luminance of an sRGB color.
pub fn relative_luminance(c: Rgb) -> f64 {
    0.2126 * linearize(c.r) + 0.7152 * linearize(c.g) + 0.0722 * linearize(c.b)
}

/// WCAG contrast ratio `(L_light + 0.05) / (L_dark + 0.05)`, in `[1, 21]`.
pub fn contrast_ratio(fg_hex: &str, bg_hex: &str) -> Result<f64, VizError> {
    let a = relative_luminance(fg_hex.parse()?);
    let b = relative_luminance(bg_hex.parse()?);
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    Ok((hi + 0.05) / (lo + 0.05))
}
