use crate::iet::{iterate, Iet};
use crate::numeric::{QAlpha, Rational};
use crate::{Error, Result};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;

/// Largest depth `idoc_check` accepts.
pub const MAX_IDOC_DEPTH: u64 = 10_000_000;

/// Largest collision time a drift certificate checks by iteration.
const MAX_RESIDUAL_STEP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `T^l(a_i) = a_i`: the orbit is finite.
    Periodic,
    /// `T^l(a_i) = a_j` with `i != j`: two orbits meet.
    Collision,
}

/// `T^step(a_from) = a_to`, indices 1-based into `D(T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdocWitness {
    pub kind: WitnessKind,
    pub from: usize,
    pub to: usize,
    pub step: u64,
    #[serde(serialize_with = "as_string")]
    pub value: QAlpha,
}

fn as_string<S: serde::Serializer>(x: &QAlpha, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl IdocWitness {
    /// Recomputes `T^step(a_from)` from scratch and compares it with `a_to`.
    pub fn reverify(&self, t: &Iet) -> Result<bool> {
        let d = t.discontinuities();
        let start = &d[self.from - 1];
        let end = iterate(t, start, self.step as i64, None)?.position;
        Ok(t.oracle().same(&end, &d[self.to - 1]) && t.oracle().same(&end, &self.value))
    }
}

/// One admissible collision time of the drift argument and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualCheck {
    pub from: usize,
    pub to: usize,
    pub step: u64,
    #[serde(serialize_with = "as_string")]
    pub landed: QAlpha,
    pub collides: bool,
}

/// All translations share the alpha coordinate `c != 0`, so
/// `T^l(x) - x` has alpha coordinate `l·c` and `T^l(a_i) = a_j` forces
/// `l = (p_j - p_i)/c` for the alpha coordinates `p_i, p_j` of `a_i, a_j`.
/// Periodicity is impossible. The finitely many admissible `(i, j, l)` are
/// checked by iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DriftCertificate {
    #[serde(serialize_with = "rational_string")]
    pub alpha_coefficient: Rational,
    pub checks: Vec<ResidualCheck>,
    /// Admissible times above the iteration cap, left unchecked.
    pub unchecked: Vec<(usize, usize, String)>,
    /// True when every admissible collision was ruled out.
    pub certified: bool,
}

fn rational_string<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl DriftCertificate {
    pub fn witness(&self) -> Option<IdocWitness> {
        self.checks.iter().find(|c| c.collides).map(|c| IdocWitness {
            kind: WitnessKind::Collision,
            from: c.from,
            to: c.to,
            step: c.step,
            value: c.landed.clone(),
        })
    }
}

/// The algebraic idoc certificate; `None` when the translations do not
/// share one non-zero alpha coordinate.
pub fn drift_certificate(t: &Iet) -> Result<Option<DriftCertificate>> {
    if !t.oracle().is_certified_irrational() {
        return Err(Error::IrrationalityUnknown {
            value: t.oracle().to_string(),
        });
    }
    let c = t.translations()[0].alpha_coeff().clone();
    if c.is_zero() || t.translations().iter().any(|d| d.alpha_coeff() != &c) {
        return Ok(None);
    }
    let d = t.discontinuities();
    let mut checks = Vec::new();
    let mut unchecked = Vec::new();
    for (i, ai) in d.iter().enumerate() {
        for (j, aj) in d.iter().enumerate() {
            if i == j {
                continue;
            }
            let l = (aj.alpha_coeff() - ai.alpha_coeff()) / &c;
            if !l.is_integer() || l <= Rational::zero() {
                continue;
            }
            match l.to_integer().to_u64().filter(|&s| s <= MAX_RESIDUAL_STEP) {
                Some(step) => {
                    let landed = iterate(t, ai, step as i64, None)?.position;
                    checks.push(ResidualCheck {
                        from: i + 1,
                        to: j + 1,
                        step,
                        collides: t.oracle().same(&landed, aj),
                        landed,
                    });
                }
                None => unchecked.push((i + 1, j + 1, l.to_string())),
            }
        }
    }
    let certified = unchecked.is_empty() && checks.iter().all(|c| !c.collides);
    Ok(Some(DriftCertificate {
        alpha_coefficient: c,
        checks,
        unchecked,
        certified,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum IdocVerdict {
    /// No collision or periodicity among the first `depth` iterates. This is
    /// evidence, not a proof of the condition.
    PassToDepth { depth: u64 },
    Certified { certificate: DriftCertificate },
    Fail { witness: IdocWitness },
}

impl IdocVerdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, IdocVerdict::Fail { .. })
    }
}

/// Advances every discontinuity in lockstep for `1..=depth` steps and
/// reports the first `l` at which some `T^l(a_i)` lands in `D(T)`.
pub fn idoc_check(t: &Iet, depth: u64) -> Result<IdocVerdict> {
    if depth > MAX_IDOC_DEPTH {
        return Err(Error::BudgetExhausted(format!(
            "idoc depth {depth} exceeds the limit {MAX_IDOC_DEPTH}"
        )));
    }
    let d = t.discontinuities();
    let index: HashMap<&QAlpha, usize> = d.iter().enumerate().map(|(k, a)| (a, k)).collect();
    let mut points: Vec<QAlpha> = d.to_vec();
    for step in 1..=depth {
        for (i, x) in points.iter_mut().enumerate() {
            *x = t.apply(x)?;
            // values are normalized, so the hash lookup is exact; confirm anyway
            if let Some(&j) = index.get(&*x) {
                if t.oracle().same(x, &d[j]) {
                    return Ok(IdocVerdict::Fail {
                        witness: IdocWitness {
                            kind: if i == j { WitnessKind::Periodic } else { WitnessKind::Collision },
                            from: i + 1,
                            to: j + 1,
                            step,
                            value: x.clone(),
                        },
                    });
                }
            }
        }
    }
    Ok(IdocVerdict::PassToDepth { depth })
}

/// The drift certificate when it applies and decides, otherwise
/// [`idoc_check`] to `depth`.
pub fn keane_verdict(t: &Iet, depth: u64) -> Result<IdocVerdict> {
    if t.oracle().is_certified_irrational() {
        if let Some(cert) = drift_certificate(t)? {
            if cert.certified {
                return Ok(IdocVerdict::Certified { certificate: cert });
            }
            if let Some(witness) = cert.witness() {
                if let IdocVerdict::Fail { witness: early } = idoc_check(t, witness.step)? {
                    return Ok(IdocVerdict::Fail { witness: early });
                }
                return Ok(IdocVerdict::Fail { witness });
            }
        }
    }
    idoc_check(t, depth)
}
