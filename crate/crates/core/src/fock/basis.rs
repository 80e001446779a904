use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIMENSION: usize = 20 * 20 * 20;

/// Per-mode cutoff `n_max` shared by all three modes, ordered
/// (optical, microwave, mechanical) with the mechanical index fastest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FockBasisSpec {
    cutoff: usize,
}

impl FockBasisSpec {
    pub fn new(cutoff: usize) -> Result<Self> {
        Self::with_limit(cutoff, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_limit(cutoff: usize, max_dimension: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::param("Fock cutoff must be >= 1"));
        }
        let levels = cutoff.checked_add(1).ok_or_else(|| Error::param("Fock cutoff overflows"))?;
        let dimension = levels
            .checked_mul(levels)
            .and_then(|d| d.checked_mul(levels))
            .ok_or(Error::ResourceLimit { dimension: usize::MAX, limit: max_dimension })?;
        if dimension > max_dimension {
            return Err(Error::ResourceLimit { dimension, limit: max_dimension });
        }
        Ok(FockBasisSpec { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Levels per mode, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dimension(&self) -> usize {
        self.levels().pow(3)
    }

    pub fn index(&self, optical: usize, microwave: usize, mechanical: usize) -> usize {
        let d = self.levels();
        (optical * d + microwave) * d + mechanical
    }

    /// Occupations `(n_o, n_w, n_b)` of a basis index.
    pub fn occupations(&self, index: usize) -> (usize, usize, usize) {
        let d = self.levels();
        (index / (d * d), (index / d) % d, index % d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let b = FockBasisSpec::new(4).unwrap();
        assert_eq!(b.dimension(), 125);
        for i in 0..b.dimension() {
            let (o, w, m) = b.occupations(i);
            assert_eq!(b.index(o, w, m), i);
        }
    }

    #[test]
    fn limits() {
        assert!(FockBasisSpec::new(0).is_err());
        assert!(FockBasisSpec::new(19).is_ok());
        assert_eq!(FockBasisSpec::new(20), Err(Error::ResourceLimit { dimension: 9261, limit: 8000 }));
        assert!(FockBasisSpec::with_limit(30, 40_000).is_ok());
    }
}
