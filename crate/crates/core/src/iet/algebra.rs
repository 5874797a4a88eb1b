use super::Iet;
use crate::numeric::{QAlpha, Rational, Sign};
use crate::{Error, Result};
use num_traits::Zero;

/// `S ∘ T` in canonical form.
///
/// The breakpoints of the result refine those of `T` by the pull-backs
/// `T⁻¹(a_k(S))`.
pub fn compose(s: &Iet, t: &Iet) -> Result<Iet> {
    if s.oracle() != t.oracle() {
        return Err(Error::MixedIrrationals {
            left: s.oracle().to_string(),
            right: t.oracle().to_string(),
        });
    }
    if s.total_length() != t.total_length() {
        return Err(Error::LengthMismatch(format!(
            "cannot compose maps of [0, {}) and [0, {})",
            s.total_length(),
            t.total_length()
        )));
    }
    let mut lengths = Vec::new();
    let mut translations = Vec::new();
    for i in 1..=t.m() {
        let d = t.translation(i);
        for (piece, k) in s.split(&t.interval(i).translate(d))? {
            lengths.push(piece.length());
            translations.push(d + s.translation(k));
        }
    }
    Iet::from_pieces(t.oracle_arc().clone(), lengths, translations)?.canonical()
}

impl Iet {
    /// `T⁻¹`: intervals `J_1, ..., J_m` with permutation `π⁻¹` and
    /// translations `-delta_{π⁻¹(j)}`.
    pub fn invert(&self) -> Result<Iet> {
        let inv = self.permutation().inverse();
        let lengths = inv.images().iter().map(|&i| self.lengths()[i - 1].clone()).collect();
        let translations = inv.images().iter().map(|&i| -self.translation(i)).collect();
        Iet::from_pieces(self.oracle_arc().clone(), lengths, translations)
    }

    /// `S ∘ self`.
    pub fn then(&self, s: &Iet) -> Result<Iet> {
        compose(s, self)
    }

    /// Conjugation by `x ↦ c·x`: every coordinate is multiplied by `c > 0`.
    pub fn rescale(&self, c: &Rational) -> Result<Iet> {
        if Sign::of_rational(c) != Sign::Positive {
            return Err(Error::ParameterOutOfRange(format!("rescale factor {c} must be positive")));
        }
        let lengths = self.lengths().iter().map(|l| l.scale(c)).collect();
        Iet::new(self.permutation().clone(), lengths, self.oracle_arc().clone())
    }

    /// The same map written in terms of `alpha' = c·alpha`: the oracle is
    /// scaled by `c` and every alpha coordinate divided by `c`.
    pub fn reparametrize_alpha(&self, c: &Rational) -> Result<Iet> {
        if c.is_zero() {
            return Err(Error::ParameterOutOfRange("alpha rescaling factor must be non-zero".into()));
        }
        let oracle = self.oracle().scaled(c)?;
        let inv = c.recip();
        let lengths = self
            .lengths()
            .iter()
            .map(|l| QAlpha::new(l.rational_part().clone(), l.alpha_coeff() * &inv))
            .collect();
        Iet::new(self.permutation().clone(), lengths, std::sync::Arc::new(oracle))
    }
}
