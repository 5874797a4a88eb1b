use crate::iet::Iet;
use crate::intervals::{Interval, IntervalText};
use crate::numeric::QAlpha;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug)]
pub struct BirkhoffOptions {
    /// Runs longer than this switch to floating point.
    pub float_threshold: u64,
}

impl Default for BirkhoffOptions {
    fn default() -> Self {
        BirkhoffOptions {
            float_threshold: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellStat {
    pub cell: IntervalText,
    pub visits: u64,
    pub frequency: f64,
    /// `|J| / r`.
    pub expected: f64,
    pub deviation: f64,
}

/// Visit frequencies of `x0, T(x0), ..., T^{N-1}(x0)` in each test cell.
#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffStats {
    pub start: String,
    pub steps: u64,
    pub mode: Mode,
    pub cells: Vec<CellStat>,
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

/// Float shadow of the exchange: breakpoints and translations.
struct FloatMap {
    breakpoints: Vec<f64>,
    translations: Vec<f64>,
}

impl FloatMap {
    fn new(t: &Iet) -> Self {
        let a = t.oracle().approx_f64();
        FloatMap {
            breakpoints: t.breakpoints().iter().map(|x| x.to_f64(a)).collect(),
            translations: t.translations().iter().map(|x| x.to_f64(a)).collect(),
        }
    }

    fn locate(&self, x: f64) -> usize {
        let m = self.translations.len();
        self.breakpoints[1..m].partition_point(|&b| b <= x)
    }
}

/// Kahan-compensated position.
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn stats(t: &Iet, start: &QAlpha, steps: u64, mode: Mode, cells: &[Interval], visits: &[u64]) -> BirkhoffStats {
    let a = t.oracle().approx_f64();
    let r = t.total_length().to_f64(a);
    let cells: Vec<CellStat> = cells
        .iter()
        .zip(visits)
        .map(|(c, &v)| {
            let frequency = v as f64 / steps as f64;
            let expected = c.length().to_f64(a) / r;
            CellStat {
                cell: c.to_strings(),
                visits: v,
                frequency,
                expected,
                deviation: (frequency - expected).abs(),
            }
        })
        .collect();
    let max_deviation = cells.iter().map(|c| c.deviation).fold(0.0, f64::max);
    let mean_deviation = cells.iter().map(|c| c.deviation).sum::<f64>() / cells.len().max(1) as f64;
    BirkhoffStats {
        start: start.to_string(),
        steps,
        mode,
        cells,
        max_deviation,
        mean_deviation,
    }
}

/// Statistics after each of the increasing step counts in `checkpoints`,
/// from a single orbit. The whole run is exact when the last checkpoint is
/// within `options.float_threshold`, floating point otherwise.
pub fn birkhoff_series(
    t: &Iet,
    x0: &QAlpha,
    checkpoints: &[u64],
    cells: &[Interval],
    options: BirkhoffOptions,
) -> Result<Vec<BirkhoffStats>> {
    let start = t.oracle().normalize(x0);
    if !t.in_domain(&start)? {
        return Err(Error::OutOfDomain {
            point: start.to_string(),
            length: t.total_length().to_string(),
        });
    }
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ParameterOutOfRange(
            "checkpoints must be positive and strictly increasing".into(),
        ));
    }
    let total = *checkpoints.last().unwrap();
    let mode = if total > options.float_threshold { Mode::Float } else { Mode::Exact };
    let mut visits = vec![0u64; cells.len()];
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    match mode {
        Mode::Exact => {
            let o = t.oracle();
            let mut x = start.clone();
            for n in 1..=total {
                for (k, c) in cells.iter().enumerate() {
                    if c.contains(&x, o)? {
                        visits[k] += 1;
                    }
                }
                x = t.apply(&x)?;
                if next.peek() == Some(&&n) {
                    next.next();
                    out.push(stats(t, &start, n, mode, cells, &visits));
                }
            }
        }
        Mode::Float => {
            let map = FloatMap::new(t);
            let a = t.oracle().approx_f64();
            let bounds: Vec<(f64, f64)> = cells.iter().map(|c| (c.lo.to_f64(a), c.hi.to_f64(a))).collect();
            let r = t.total_length().to_f64(a);
            let mut x = Compensated {
                sum: start.to_f64(a),
                carry: 0.0,
            };
            for n in 1..=total {
                for (k, &(lo, hi)) in bounds.iter().enumerate() {
                    if lo <= x.sum && x.sum < hi {
                        visits[k] += 1;
                    }
                }
                let i = map.locate(x.sum);
                x.add(map.translations[i]);
                if !(0.0..r).contains(&x.sum) {
                    // rounding pushed the point across an end of the domain
                    x.sum = x.sum.rem_euclid(r);
                    x.carry = 0.0;
                }
                if next.peek() == Some(&&n) {
                    next.next();
                    out.push(stats(t, &start, n, mode, cells, &visits));
                }
            }
        }
    }
    Ok(out)
}

/// Visit frequencies of the first `steps` orbit points in each cell.
pub fn birkhoff_discrepancy(
    t: &Iet,
    x0: &QAlpha,
    steps: u64,
    cells: &[Interval],
    options: BirkhoffOptions,
) -> Result<BirkhoffStats> {
    Ok(birkhoff_series(t, x0, &[steps], cells, options)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{thm14_family, thm15_family};
    use crate::iet::{build_iet, Permutation};
    use crate::numeric::{rational, AlphaOracle};
    use std::sync::Arc;

    fn sqrt2_over(k: i64) -> Arc<AlphaOracle> {
        Arc::new(AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap())
    }

    fn iv(lo: &str, hi: &str) -> Interval {
        Interval::new(lo.parse().unwrap(), hi.parse().unwrap())
    }

    #[test]
    fn identity_stays_put() {
        let t = build_iet(Permutation::identity(2), vec!["1/2".parse().unwrap(); 2], sqrt2_over(2)).unwrap();
        let s = birkhoff_discrepancy(&t, &"1/3".parse().unwrap(), 50, &[iv("0", "1/2"), iv("1/2", "1")], Default::default()).unwrap();
        assert_eq!((s.cells[0].visits, s.cells[1].visits), (50, 0));
        assert_eq!(s.mode, Mode::Exact);
    }

    #[test]
    fn trapped_orbit_never_visits_the_middle_block() {
        let t = thm15_family(&Permutation::reversal(3), sqrt2_over(2)).unwrap();
        let s = birkhoff_discrepancy(&t, &"1/10".parse().unwrap(), 2000, &[iv("0", "1"), iv("1", "2"), iv("2", "3")], Default::default()).unwrap();
        assert_eq!(s.cells[1].visits, 0);
        assert_eq!(s.cells[0].visits + s.cells[2].visits, 2000);
    }

    #[test]
    fn float_mode_agrees_with_exact_mode_on_short_runs() {
        let t = thm14_family(4, sqrt2_over(6)).unwrap();
        let cells: Vec<Interval> = (1..=4).map(|i| t.interval(i)).collect();
        let x0: QAlpha = "0".parse().unwrap();
        let exact = birkhoff_discrepancy(&t, &x0, 2000, &cells, Default::default()).unwrap();
        let float = birkhoff_discrepancy(&t, &x0, 2000, &cells, BirkhoffOptions { float_threshold: 10 }).unwrap();
        assert_eq!(float.mode, Mode::Float);
        for (e, f) in exact.cells.iter().zip(&float.cells) {
            assert_eq!(e.visits, f.visits);
        }
        let sum: f64 = exact.cells.iter().map(|c| c.frequency).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let t = thm14_family(4, sqrt2_over(6)).unwrap();
        assert!(matches!(
            birkhoff_discrepancy(&t, &QAlpha::one(), 10, &[], Default::default()),
            Err(Error::OutOfDomain { .. })
        ));
    }
}
