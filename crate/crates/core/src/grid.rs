//! Dense row-major 2D matrices indexed by grid cell.

use serde::{Deserialize, Serialize};

use crate::num::Scalar;

/// A `height × width` matrix stored row-major. Row 0 is grid row `y = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Builds a grid from row-major data. Returns `None` on a length mismatch.
    pub fn from_rows(width: usize, height: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == width * height).then_some(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(col, row));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Zero-based `(col, row)` access.
    pub fn get(&self, col: usize, row: usize) -> T {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: T) {
        self.data[row * self.width + col] = value;
    }

    /// Access by 1-based grid coordinates `(x, y)`.
    pub fn at(&self, x: u32, y: u32) -> T {
        self.get(x as usize - 1, y as usize - 1)
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl<T: Scalar> Grid<T> {
    pub fn sum(&self) -> T {
        self.data.iter().copied().sum()
    }

    /// Minimum and maximum entry, or `None` when empty.
    pub fn extremes(&self) -> Option<(T, T)> {
        let mut it = self.data.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}
