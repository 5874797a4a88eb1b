use super::Iet;
use crate::numeric::{QAlpha, Rational};
use crate::{Error, Result};
use serde::Serialize;

/// The state of an orbit after `step` iterations.
///
/// `position = start + Σ occupation[i] · delta_{i+1}` holds exactly, where the
/// deltas are those of the map actually iterated (the canonical inverse for
/// negative steps).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPoint {
    #[serde(serialize_with = "as_string")]
    pub start: QAlpha,
    #[serde(serialize_with = "as_string")]
    pub position: QAlpha,
    pub step: i64,
    pub occupation: Vec<u64>,
}

fn as_string<S: serde::Serializer>(x: &QAlpha, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl OrbitPoint {
    /// `position - start`.
    pub fn displacement(&self) -> QAlpha {
        &self.position - &self.start
    }

    /// Rational coordinate of the displacement.
    pub fn drift_rational(&self) -> Rational {
        self.displacement().rational_part().clone()
    }

    /// Alpha coordinate of the displacement.
    pub fn drift_alpha(&self) -> Rational {
        self.displacement().alpha_coeff().clone()
    }
}

/// `T^l(x0)` with occupation counts. `budget` caps `|l|`.
pub fn iterate(t: &Iet, x0: &QAlpha, l: i64, budget: Option<u64>) -> Result<OrbitPoint> {
    let steps = l.unsigned_abs();
    if let Some(b) = budget {
        if steps > b {
            return Err(Error::BudgetExhausted(format!("{steps} iterations requested, budget {b}")));
        }
    }
    let inverse;
    let map = if l < 0 {
        inverse = t.invert()?;
        &inverse
    } else {
        t
    };
    let start = map.oracle().normalize(x0);
    let mut position = start.clone();
    let mut occupation = vec![0u64; map.m()];
    if !map.in_domain(&position)? {
        return Err(map.out_of_domain(&position));
    }
    for _ in 0..steps {
        let i = map.locate(&position)?;
        occupation[i - 1] += 1;
        position += map.translation(i);
    }
    Ok(OrbitPoint {
        start,
        position,
        step: l,
        occupation,
    })
}

impl Iet {
    /// Forward orbit `x, T(x), T²(x), ...` as an iterator of exact points.
    pub fn orbit(&self, x0: &QAlpha) -> Result<Orbit<'_>> {
        let x = self.oracle().normalize(x0);
        if !self.in_domain(&x)? {
            return Err(self.out_of_domain(&x));
        }
        Ok(Orbit { map: self, next: x })
    }
}

/// Iterator over a forward orbit; yields the branch index with each point.
pub struct Orbit<'a> {
    map: &'a Iet,
    next: QAlpha,
}

impl Iterator for Orbit<'_> {
    type Item = Result<(QAlpha, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        let i = match self.map.locate(&self.next) {
            Ok(i) => i,
            Err(e) => return Some(Err(e)),
        };
        let after = &self.next + self.map.translation(i);
        Some(Ok((std::mem::replace(&mut self.next, after), i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::{build_iet, Permutation};
    use crate::numeric::{rational, AlphaOracle};
    use std::sync::Arc;

    fn m4() -> Iet {
        let oracle = Arc::new(AlphaOracle::sqrt(rational(1, 6), rational(2, 1)).unwrap());
        let lengths = ["1/3", "1/3", "1/3-a", "a"].iter().map(|s| s.parse().unwrap()).collect();
        build_iet("[3,2,4,1]".parse::<Permutation>().unwrap(), lengths, oracle).unwrap()
    }

    #[test]
    fn zero_steps() {
        let t = m4();
        let x: QAlpha = "1/7".parse().unwrap();
        let o = iterate(&t, &x, 0, None).unwrap();
        assert_eq!(o.position, x);
        assert!(o.occupation.iter().all(|&n| n == 0));
    }

    #[test]
    fn alpha_drift_equals_step_count() {
        let t = m4();
        let x: QAlpha = "1/5".parse().unwrap();
        for l in [1, 7, 50, 333] {
            let o = iterate(&t, &x, l, None).unwrap();
            assert_eq!(o.drift_alpha(), rational(l, 1));
            let denom = o.drift_rational() * rational(3, 1);
            assert!(denom.is_integer());
            let sum = o
                .occupation
                .iter()
                .zip(t.translations())
                .fold(x.clone(), |acc, (&n, d)| acc + d.scale(&rational(n as i64, 1)));
            assert_eq!(sum, o.position);
            assert_eq!(o.occupation.iter().sum::<u64>(), l as u64);
        }
    }

    #[test]
    fn negative_steps_undo_forward_steps() {
        let t = m4();
        let x: QAlpha = "2/9".parse().unwrap();
        let fwd = iterate(&t, &x, 40, None).unwrap();
        let back = iterate(&t, &fwd.position, -40, None).unwrap();
        assert_eq!(back.position, x);
    }

    #[test]
    fn budget_is_enforced() {
        let t = m4();
        let err = iterate(&t, &QAlpha::zero(), 11, Some(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(_)));
    }

    #[test]
    fn orbit_iterator_matches_iterate() {
        let t = m4();
        let x: QAlpha = "1/11".parse().unwrap();
        let via_iter = t.orbit(&x).unwrap().nth(25).unwrap().unwrap().0;
        assert_eq!(via_iter, iterate(&t, &x, 25, None).unwrap().position);
    }
}
