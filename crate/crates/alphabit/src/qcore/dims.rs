use crate::{Error, Result};

/// Ordered list of labelled subsystems making up a tensor-product space.
///
/// Labels are unique; the product of the dimensions equals the dimension of
/// any operator the profile is attached to. Subsystem order is significant
/// and is never silently reordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsProfile {
    parts: Vec<(String, usize)>,
}

impl DimsProfile {
    pub fn new<I, S>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let parts: Vec<(String, usize)> = parts.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (label, dim) in &parts {
            if *dim == 0 {
                return Err(Error::OutOfRange {
                    what: "subsystem dimension",
                    value: 0.0,
                });
            }
            if parts.iter().filter(|(l, _)| l == label).count() > 1 {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { parts })
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Self {
        Self {
            parts: vec![(label.into(), dim)],
        }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total dimension: the product of all subsystem dimensions.
    pub fn total(&self) -> usize {
        self.parts.iter().map(|(_, d)| d).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|(_, d)| *d).collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().map(|(l, _)| l.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.parts.iter().map(|(l, d)| (l.as_str(), *d))
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.parts[self.position(label)?].1)
    }

    /// Concatenation, preserving order (self first). Fails on label clashes.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.parts
                .iter()
                .chain(other.parts.iter())
                .map(|(l, d)| (l.clone(), *d)),
        )
    }

    /// Positions of `keep` within the profile, in original subsystem order.
    pub fn keep_positions(&self, keep: &[&str]) -> Result<Vec<usize>> {
        let mut pos: Vec<usize> = keep
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<_>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    /// Sub-profile restricted to the subsystems at `positions` (ascending).
    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            parts: positions.iter().map(|&p| self.parts[p].clone()).collect(),
        }
    }

    /// Replace the dimension at `label`, keeping order and the other parts.
    pub fn with_dim(&self, label: &str, dim: usize) -> Result<Self> {
        let pos = self.position(label)?;
        let mut parts = self.parts.clone();
        parts[pos].1 = dim;
        Ok(Self { parts })
    }

    /// Row-major strides: `stride[i]` is the product of dims after position i.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.parts.len()];
        for i in (0..self.parts.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.parts[i + 1].1;
        }
        strides
    }
}
