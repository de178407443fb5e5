//! Automorphisms of `SL_s^p(F)` in the normal form `H · Aut_F(M_s^p) · Aut(F)`.
//!
//! A descriptor applies, in order: the involution `ψ: g ↦ (g⁻¹)^t` (when
//! flagged), conjugation by an invertible periodic matrix, and an entrywise
//! power of Frobenius. Composition uses the relations
//!
//! * `ψ ∘ inner_h = inner_{ψ(h)} ∘ ψ`,
//! * `ψ ∘ τ̃ = τ̃ ∘ ψ`,
//! * `inner_h ∘ τ̃ = τ̃ ∘ inner_{τ̃⁻¹(h)}`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::arith::lcm_usize;
use crate::fields::{Field, FieldError};
use crate::permatrix::{MatrixError, PeriodicMatrix};
use crate::steinitz::SteinitzNumber;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutoError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("conjugator of period {period} is not in M_s^p for s = {index}")]
    OutsideIndex { period: usize, index: alloc::string::String },
}

/// `ψ(g) = (g⁻¹)^t`.
pub fn apply_psi(g: &PeriodicMatrix) -> Result<PeriodicMatrix, AutoError> {
    Ok(g.inverse()?.transpose())
}

/// Entrywise Frobenius power `τ̃`.
pub fn lift_field_auto(power: u64, a: &PeriodicMatrix) -> Result<PeriodicMatrix, AutoError> {
    let f = a.field();
    if power == 0 {
        return Ok(a.clone());
    }
    if f.is_rationals() {
        return Err(FieldError::FrobeniusOnRationals.into());
    }
    Ok(a.map_entries(|f, x| f.frobenius(x, power).expect("finite field")))
}

/// `h·g·h⁻¹`.
pub fn inner(h: &PeriodicMatrix, g: &PeriodicMatrix) -> Result<PeriodicMatrix, AutoError> {
    let hi = h.inverse()?;
    Ok(h.mul(g)?.mul(&hi)?)
}

fn inverse_power(field: &Field, power: u64) -> u64 {
    let k = field.degree() as u64;
    (k - power % k) % k
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AutomorphismDescriptor {
    psi: bool,
    frob: u64,
    inner: Option<PeriodicMatrix>,
}

impl AutomorphismDescriptor {
    /// Builds a descriptor in normal form. A central (period-1) conjugator is
    /// dropped and `frob` is reduced mod the degree when the field is known.
    pub fn new(psi: bool, frob: u64, inner: Option<PeriodicMatrix>) -> Result<Self, AutoError> {
        if let Some(h) = &inner {
            if !h.is_invertible() {
                return Err(MatrixError::Singular.into());
            }
        }
        Ok(Self::normalized(psi, frob, inner))
    }

    fn normalized(psi: bool, mut frob: u64, inner: Option<PeriodicMatrix>) -> Self {
        if let Some(h) = &inner {
            if h.field().is_finite() {
                frob %= h.field().degree() as u64;
            }
        }
        AutomorphismDescriptor {
            psi,
            frob,
            inner: inner.filter(|h| h.period() > 1),
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn psi() -> Self {
        AutomorphismDescriptor {
            psi: true,
            ..Self::default()
        }
    }

    pub fn field_automorphism(frob: u64) -> Self {
        AutomorphismDescriptor {
            frob,
            ..Self::default()
        }
    }

    pub fn inner_by(h: PeriodicMatrix) -> Result<Self, AutoError> {
        Self::new(false, 0, Some(h))
    }

    pub fn has_psi(&self) -> bool {
        self.psi
    }

    pub fn frob(&self) -> u64 {
        self.frob
    }

    pub fn conjugator(&self) -> Option<&PeriodicMatrix> {
        self.inner.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        !self.psi && self.frob == 0 && self.inner.is_none()
    }

    /// Checks that the conjugator lies in `M_s^p(F)`.
    pub fn check_index(&self, s: &SteinitzNumber) -> Result<(), AutoError> {
        match &self.inner {
            Some(h) if !s.is_multiple_of(h.period() as u64) => Err(AutoError::OutsideIndex {
                period: h.period(),
                index: s.to_string(),
            }),
            _ => Ok(()),
        }
    }

    /// `ψ`, then conjugation, then the entrywise field map.
    pub fn apply(&self, g: &PeriodicMatrix) -> Result<PeriodicMatrix, AutoError> {
        let mut x = if self.psi { apply_psi(g)? } else { g.clone() };
        if let Some(h) = &self.inner {
            x = inner(h, &x)?;
        }
        lift_field_auto(self.frob, &x)
    }

    /// The normal form of `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, AutoError> {
        if let (Some(a), Some(b)) = (&self.inner, &other.inner) {
            a.field().check_same(b.field())?;
        }
        let moved_other = match &other.inner {
            Some(h) if self.psi => Some(apply_psi(h)?),
            h => h.clone(),
        };
        let moved_self = match &self.inner {
            Some(h) => Some(lift_field_auto(inverse_power(h.field(), other.frob), h)?),
            None => None,
        };
        let inner = match (moved_self, moved_other) {
            (Some(a), Some(b)) => Some(a.mul(&b)?),
            (a, b) => a.or(b),
        };
        Ok(Self::normalized(self.psi ^ other.psi, self.frob + other.frob, inner))
    }

    /// Pointwise comparison on the transvections `t_ij(1)`, `t_ij(ω)` at a
    /// level `L ≥ 3` divisible by every conjugator period, `ω` the field
    /// generator. Conjugators are only determined up to central scalars, so
    /// descriptors are compared by action rather than by components.
    pub fn equivalent(&self, other: &Self, field: &Field) -> Result<bool, AutoError> {
        let base = [&self.inner, &other.inner]
            .into_iter()
            .flatten()
            .fold(1, |acc, h| lcm_usize(acc, h.period()));
        let level = base * 3usize.div_ceil(base);
        for g in generator_set(field, level)? {
            if self.apply(&g)? != other.apply(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `t_ij(1)` and `t_ij(ω)` for all `i ≠ j ≤ level`.
pub fn generator_set(field: &Field, level: usize) -> Result<Vec<PeriodicMatrix>, AutoError> {
    let mut out = Vec::new();
    for i in 1..=level {
        for j in (1..=level).filter(|&j| j != i) {
            for a in [field.one(), field.generator()] {
                out.push(PeriodicMatrix::transvection(field, level, i, j, a)?);
            }
        }
    }
    Ok(out)
}

/// A ring anti-automorphism `θ(a) = τ̃(h·a^t·h⁻¹)` of `M_s^p(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AntiIsomorphism {
    frob: u64,
    inner: Option<PeriodicMatrix>,
}

impl AntiIsomorphism {
    pub fn transpose() -> Self {
        Self::default()
    }

    pub fn new(frob: u64, inner: Option<PeriodicMatrix>) -> Result<Self, AutoError> {
        let d = AutomorphismDescriptor::new(false, frob, inner)?;
        Ok(AntiIsomorphism {
            frob: d.frob,
            inner: d.inner,
        })
    }

    /// Reads the group automorphism `g ↦ θ(g⁻¹)`, a `ψ`-flagged descriptor,
    /// as the anti-isomorphism `θ`; only the field and inner parts are used.
    pub fn from_descriptor(d: &AutomorphismDescriptor) -> Self {
        AntiIsomorphism {
            frob: d.frob,
            inner: d.inner.clone(),
        }
    }

    pub fn apply(&self, a: &PeriodicMatrix) -> Result<PeriodicMatrix, AutoError> {
        let mut x = a.transpose();
        if let Some(h) = &self.inner {
            x = inner(h, &x)?;
        }
        lift_field_auto(self.frob, &x)
    }

    /// The automorphism `g ↦ θ(g⁻¹)` of the unit group.
    pub fn group_automorphism(&self) -> AutomorphismDescriptor {
        AutomorphismDescriptor {
            psi: true,
            frob: self.frob,
            inner: self.inner.clone(),
        }
    }
}

/// `θ'(a) = θ(a^t)`: composing an anti-isomorphism with the transpose gives
/// an isomorphism, and `θ(g⁻¹) = θ'((g⁻¹)^t)`.
pub fn anti_to_iso(theta: &AntiIsomorphism) -> AutomorphismDescriptor {
    AutomorphismDescriptor {
        psi: false,
        frob: theta.frob,
        inner: theta.inner.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Value;
    use crate::groups::{sl_membership, SlMembership};
    use alloc::vec;
    use proptest::prelude::*;

    fn f25() -> Field {
        Field::extension(5, 2, None).unwrap()
    }

    fn t(f: &Field, n: usize, i: usize, j: usize, a: Value) -> PeriodicMatrix {
        PeriodicMatrix::transvection(f, n, i, j, a).unwrap()
    }

    #[test]
    fn psi_examples() {
        let f = f25();
        assert!(apply_psi(&PeriodicMatrix::identity(&f)).unwrap().is_identity());
        let a = f.generator();
        assert_eq!(apply_psi(&t(&f, 3, 1, 2, a.clone())).unwrap(), t(&f, 3, 2, 1, f.neg(&a)));
        assert!(apply_psi(&PeriodicMatrix::zero(&f)).is_err());
    }

    #[test]
    fn field_lift_examples() {
        let f = f25();
        let tt = f.generator();
        let m = t(&f, 2, 1, 2, tt.clone());
        assert_eq!(lift_field_auto(0, &m).unwrap(), m);
        let four_t = Value::Poly(vec![0, 4]);
        assert_eq!(f.frobenius(&tt, 1).unwrap(), four_t);
        assert_eq!(lift_field_auto(1, &m).unwrap(), t(&f, 2, 1, 2, four_t));
        let q = Field::rationals();
        assert!(lift_field_auto(1, &PeriodicMatrix::identity(&q)).is_err());
        assert!(lift_field_auto(0, &PeriodicMatrix::identity(&q)).is_ok());
    }

    #[test]
    fn inner_examples() {
        let f = f25();
        let h = t(&f, 2, 2, 1, f.generator());
        let g = t(&f, 3, 1, 3, f.one());
        assert_eq!(inner(&PeriodicMatrix::identity(&f), &g).unwrap(), g);
        assert!(inner(&h, &PeriodicMatrix::identity(&f)).unwrap().is_identity());
        assert!(inner(&PeriodicMatrix::zero(&f), &g).is_err());
    }

    #[test]
    fn descriptor_examples() {
        let f = f25();
        let a = f.generator();
        let g = t(&f, 2, 1, 2, a.clone());
        assert_eq!(AutomorphismDescriptor::identity().apply(&g).unwrap(), g);
        let d = AutomorphismDescriptor::new(true, 0, Some(PeriodicMatrix::identity(&f))).unwrap();
        assert_eq!(d, AutomorphismDescriptor::psi());
        assert_eq!(d.apply(&g).unwrap(), t(&f, 2, 2, 1, f.neg(&a)));
        assert!(AutomorphismDescriptor::new(false, 0, Some(PeriodicMatrix::zero(&f))).is_err());
        let h = t(&f, 2, 1, 2, f.one());
        let d = AutomorphismDescriptor::new(false, 3, Some(h.clone())).unwrap();
        assert_eq!(d.frob(), 1);
        assert!(d.check_index(&SteinitzNumber::parse("2^inf").unwrap()).is_ok());
        assert!(d.check_index(&SteinitzNumber::parse("3^inf").unwrap()).is_err());
    }

    #[test]
    fn compose_examples() {
        let f = f25();
        let h = t(&f, 2, 1, 2, f.generator());
        let d = AutomorphismDescriptor::new(true, 1, Some(h.clone())).unwrap();
        assert_eq!(d.compose(&AutomorphismDescriptor::identity()).unwrap(), d);
        let psi = AutomorphismDescriptor::psi();
        assert!(psi.compose(&psi).unwrap().is_trivial());
        let ih = AutomorphismDescriptor::inner_by(h.clone()).unwrap();
        let c = psi.compose(&ih).unwrap();
        assert!(c.has_psi());
        assert_eq!(c.conjugator(), Some(&apply_psi(&h).unwrap()));
        assert!(c
            .equivalent(&AutomorphismDescriptor::new(true, 0, Some(apply_psi(&h).unwrap())).unwrap(), &f)
            .unwrap());
        assert!(!psi.equivalent(&AutomorphismDescriptor::identity(), &f).unwrap());
        assert!(!AutomorphismDescriptor::field_automorphism(1)
            .equivalent(&AutomorphismDescriptor::identity(), &f)
            .unwrap());
        // Conjugation by a scalar multiple of h is the same automorphism.
        let scaled = h.scalar_mul(&f.from_i64(3));
        let d2 = AutomorphismDescriptor::inner_by(scaled).unwrap();
        assert_ne!(d2, ih);
        assert!(d2.equivalent(&ih, &f).unwrap());
    }

    #[test]
    fn anti_examples() {
        let f = f25();
        assert!(anti_to_iso(&AntiIsomorphism::transpose()).is_trivial());
        let h = t(&f, 2, 2, 1, f.generator());
        let theta = AntiIsomorphism::new(0, Some(h.clone())).unwrap();
        let g = t(&f, 3, 1, 2, f.one());
        assert_eq!(theta.apply(&g).unwrap(), inner(&h, &g.transpose()).unwrap());
        let iso = anti_to_iso(&theta);
        assert_eq!(iso, AutomorphismDescriptor::inner_by(h.clone()).unwrap());
        let gi = g.inverse().unwrap();
        assert_eq!(theta.apply(&gi).unwrap(), iso.apply(&gi.transpose()).unwrap());
        assert_eq!(theta.group_automorphism().apply(&g).unwrap(), theta.apply(&gi).unwrap());
        assert_eq!(AntiIsomorphism::from_descriptor(&theta.group_automorphism()), theta);
    }

    fn arb_invertible(periods: Vec<usize>) -> impl Strategy<Value = PeriodicMatrix> {
        prop::sample::select(periods).prop_flat_map(|n| {
            proptest::collection::vec((0u64..5, 0u64..5), n * n)
                .prop_map(move |xs| {
                    let rows = xs
                        .chunks(n)
                        .map(|r| r.iter().map(|&(a, b)| Value::Poly(vec![a, b])).collect())
                        .collect();
                    PeriodicMatrix::make(&f25(), n, rows).unwrap()
                })
                .prop_filter("invertible", |a| a.is_invertible())
        })
    }

    fn arb_descriptor() -> impl Strategy<Value = AutomorphismDescriptor> {
        (any::<bool>(), 0u64..2, proptest::option::of(arb_invertible(vec![1, 2, 3])))
            .prop_map(|(psi, frob, h)| AutomorphismDescriptor::new(psi, frob, h).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn psi_is_an_involutive_homomorphism(g in arb_invertible(vec![1, 2, 3]), h in arb_invertible(vec![2, 4])) {
            prop_assert_eq!(apply_psi(&apply_psi(&g).unwrap()).unwrap(), g.clone());
            prop_assert_eq!(
                apply_psi(&g.mul(&h).unwrap()).unwrap(),
                apply_psi(&g).unwrap().mul(&apply_psi(&h).unwrap()).unwrap()
            );
        }

        #[test]
        fn frobenius_lift_is_a_ring_map(a in arb_invertible(vec![1, 2]), b in arb_invertible(vec![2, 3])) {
            let fr = |x: &PeriodicMatrix| lift_field_auto(1, x).unwrap();
            prop_assert_eq!(fr(&a.mul(&b).unwrap()), fr(&a).mul(&fr(&b)).unwrap());
            prop_assert_eq!(fr(&a.add(&b).unwrap()), fr(&a).add(&fr(&b)).unwrap());
            prop_assert_eq!(fr(&a.transpose()), fr(&a).transpose());
        }

        #[test]
        fn compose_is_sound(d1 in arb_descriptor(), d2 in arb_descriptor(), g in arb_invertible(vec![2, 3, 6])) {
            let c = d1.compose(&d2).unwrap();
            prop_assert_eq!(c.apply(&g).unwrap(), d1.apply(&d2.apply(&g).unwrap()).unwrap());
        }

        #[test]
        fn inner_is_an_action(h1 in arb_invertible(vec![1, 2]), h2 in arb_invertible(vec![2, 3]), g in arb_invertible(vec![3])) {
            prop_assert_eq!(
                inner(&h1.mul(&h2).unwrap(), &g).unwrap(),
                inner(&h1, &inner(&h2, &g).unwrap()).unwrap()
            );
        }

        #[test]
        fn apply_preserves_sl(d in arb_descriptor(), g in arb_invertible(vec![2, 3])) {
            let s = SteinitzNumber::parse("2^inf * 3^inf").unwrap();
            let member = sl_membership(&g, &s);
            let image = d.apply(&g).unwrap();
            prop_assert_eq!(member.is_member(), sl_membership(&image, &s).is_member());
            if let SlMembership::Member { level } = member {
                let at = lcm_usize(level as usize, image.period());
                prop_assert!(image.field().is_one(&image.det_at(at).unwrap()));
            }
        }
    }
}
