//! Frames of discernment and bitmask subsets.
//!
//! A [`Frame`] is the ordered list of class labels; label position is the
//! canonical class index. [`SubsetMask`] encodes a subset of a frame of at
//! most [`MAX_GENERAL_FRAME`] classes as a bit pattern, which is what the
//! general (enumerating) engine works with. Larger frames are only usable
//! through [`crate::compact::CompactMass`].

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{DstError, Result};

/// Largest frame the general engine will enumerate (2^16 subsets).
pub const MAX_GENERAL_FRAME: usize = 16;

/// Ordered, duplicate-free set of class labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(DstError::TooFewClasses(labels.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(DstError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// Frame labelled `c0 .. c{n-1}`.
    pub fn indexed(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| format!("c{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The whole frame as a subset.
    pub fn theta(&self) -> Result<SubsetMask> {
        SubsetMask::theta(self.size())
    }

    pub fn empty_set(&self) -> Result<SubsetMask> {
        SubsetMask::empty(self.size())
    }

    pub fn singleton(&self, class: usize) -> Result<SubsetMask> {
        SubsetMask::from_indices(self.size(), [class])
    }

    /// Subset containing the named labels.
    pub fn subset_of<'a, I>(&self, labels: I) -> Result<SubsetMask>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut indices = Vec::new();
        for label in labels {
            let idx = self.index_of(label).ok_or(DstError::FrameMismatch)?;
            indices.push(idx);
        }
        SubsetMask::from_indices(self.size(), indices)
    }

    /// All `2^n` subsets in ascending bit-pattern order.
    pub fn powerset(&self) -> Result<PowerSet> {
        PowerSet::new(self.size())
    }
}

fn check_general(size: usize) -> Result<()> {
    if size > MAX_GENERAL_FRAME {
        Err(DstError::FrameTooLarge {
            size,
            max: MAX_GENERAL_FRAME,
        })
    } else {
        Ok(())
    }
}

/// A subset of a frame of size `n <= 16`, bit `i` set iff class `i` is a member.
///
/// Ordering is by bit pattern, so sorted collections iterate subsets in the
/// same order as [`PowerSet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    frame_size: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, frame_size: usize) -> Result<Self> {
        check_general(frame_size)?;
        if bits & !Self::full_bits(frame_size) != 0 {
            return Err(DstError::IndexOutOfRange {
                index: 31 - bits.leading_zeros() as usize,
                size: frame_size,
            });
        }
        Ok(Self {
            bits,
            frame_size: frame_size as u8,
        })
    }

    pub fn empty(frame_size: usize) -> Result<Self> {
        Self::new(0, frame_size)
    }

    pub fn theta(frame_size: usize) -> Result<Self> {
        check_general(frame_size)?;
        Self::new(Self::full_bits(frame_size), frame_size)
    }

    pub fn from_indices<I>(frame_size: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        check_general(frame_size)?;
        let mut bits = 0u32;
        for index in indices {
            if index >= frame_size {
                return Err(DstError::IndexOutOfRange {
                    index,
                    size: frame_size,
                });
            }
            bits |= 1 << index;
        }
        Self::new(bits, frame_size)
    }

    fn full_bits(frame_size: usize) -> u32 {
        (1u32 << frame_size) - 1
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn frame_size(self) -> usize {
        self.frame_size as usize
    }

    fn check_same(self, other: Self) -> Result<()> {
        if self.frame_size == other.frame_size {
            Ok(())
        } else {
            Err(DstError::FrameMismatch)
        }
    }

    pub fn intersection(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.meet(other))
    }

    pub fn union(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            bits: self.bits | other.bits,
            ..self
        })
    }

    /// `Θ \ self`.
    pub fn complement(self) -> Self {
        Self {
            bits: !self.bits & Self::full_bits(self.frame_size()),
            ..self
        }
    }

    pub fn is_subset(self, other: Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.within(other))
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_theta(self) -> bool {
        self.bits == Self::full_bits(self.frame_size())
    }

    pub fn cardinality(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, class: usize) -> bool {
        class < self.frame_size() && self.bits & (1 << class) != 0
    }

    /// Member class indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.frame_size()).filter(move |i| bits & (1 << i) != 0)
    }

    // Unchecked variants for callers that already validated frame sizes.
    pub(crate) fn meet(self, other: Self) -> Self {
        Self {
            bits: self.bits & other.bits,
            ..self
        }
    }

    pub(crate) fn within(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}/{}", self.frame_size)
    }
}

/// Iterator over every subset of a frame, ascending by bit pattern.
#[derive(Debug, Clone)]
pub struct PowerSet {
    next: u32,
    end: u32,
    frame_size: u8,
}

impl PowerSet {
    pub fn new(frame_size: usize) -> Result<Self> {
        check_general(frame_size)?;
        Ok(Self {
            next: 0,
            end: 1u32 << frame_size,
            frame_size: frame_size as u8,
        })
    }
}

impl Iterator for PowerSet {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        if self.next >= self.end {
            return None;
        }
        let bits = self.next;
        self.next += 1;
        Some(SubsetMask {
            bits,
            frame_size: self.frame_size,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PowerSet {}
