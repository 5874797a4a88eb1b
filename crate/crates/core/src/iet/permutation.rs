use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A bijection of `{1, ..., m}` in one-line notation: `images[i - 1] = π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        if m == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; m];
        for &v in &images {
            if v == 0 || v > m {
                return Err(Error::InvalidPermutation(format!("image {v} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (1..=m).collect(),
        }
    }

    /// `(m m-1 ... 1)`.
    pub fn reversal(m: usize) -> Self {
        Permutation {
            images: (1..=m).rev().collect(),
        }
    }

    /// `(2 3 ... n 1)`, a single n-cycle.
    pub fn cyclic_shift(n: usize) -> Self {
        Permutation {
            images: (1..=n).map(|i| i % n + 1).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `π(i)`, 1-indexed.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.image(j)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line image notation `[i1,...,im]`; the brackets are optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(inner);
        let images = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("`{}` is not a positive integer", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: Permutation = "[3, 2, 4, 1]".parse().unwrap();
        assert_eq!(p.images(), &[3, 2, 4, 1]);
        assert_eq!(p.to_string(), "[3,2,4,1]");
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("[0,1]".parse::<Permutation>().is_err());
        assert!("[]".parse::<Permutation>().is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let p: Permutation = "[3,2,4,1]".parse().unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(Permutation::cyclic_shift(4).images(), &[2, 3, 4, 1]);
        assert_eq!(Permutation::reversal(3).images(), &[3, 2, 1]);
    }
}
