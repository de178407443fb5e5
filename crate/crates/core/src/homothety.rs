//! The relative determinant `det_r(a) = τ_n(det_{M_n}(a))` on `M_s^p(F)` and
//! the central homothety it induces on the unit group.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fields::{Field, FieldError, RootTower, Value};
use crate::groups::commutator;
use crate::permatrix::{MatrixError, PeriodicMatrix};
use crate::steinitz::SteinitzNumber;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomothetyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("level {level} does not divide the index {index}")]
    PeriodNotDividesIndex { level: usize, index: String },
}

/// `det_r` over a root tower `(F, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeDeterminant {
    tower: RootTower,
}

impl RelativeDeterminant {
    pub fn new(tower: RootTower) -> Self {
        RelativeDeterminant { tower }
    }

    pub fn for_index(field: &Field, s: &SteinitzNumber) -> Result<Self, HomothetyError> {
        Ok(Self::new(RootTower::new(field.clone(), s.clone())?))
    }

    pub fn tower(&self) -> &RootTower {
        &self.tower
    }

    pub fn field(&self) -> &Field {
        self.tower.field()
    }

    /// `τ_n(det_n(a))` at the minimal period `n`. Zero on singular matrices.
    pub fn det_r(&self, a: &PeriodicMatrix) -> Result<Value, HomothetyError> {
        self.det_r_at(a, a.period())
    }

    /// `τ_m(det_m(a))` at an explicit level `m` with `period | m | s`.
    /// Equal to [`det_r`](Self::det_r) for every admissible `m`.
    pub fn det_r_at(&self, a: &PeriodicMatrix, level: usize) -> Result<Value, HomothetyError> {
        self.field().check_same(a.field())?;
        if !self.tower.index().is_multiple_of(level as u64) {
            return Err(HomothetyError::PeriodNotDividesIndex {
                level,
                index: self.tower.index().to_string(),
            });
        }
        let det = a.det_at(level)?;
        Ok(self.tower.tau(level as u64, &det)?)
    }

    pub fn homothety(&self) -> CentralHomothety {
        CentralHomothety { rd: self.clone() }
    }
}

/// The multiplicative map `A* → F*`, `a ↦ det_r(a)`, trivial on commutators.
#[derive(Clone, Debug)]
pub struct CentralHomothety {
    rd: RelativeDeterminant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A sample was singular or outside `M_s^p`.
    InvalidSample,
    Multiplicativity,
    Commutator,
    Unit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub sample: usize,
    pub violation: Violation,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomothetyReport {
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl HomothetyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl CentralHomothety {
    pub fn image(&self, g: &PeriodicMatrix) -> Result<Value, HomothetyError> {
        self.rd.det_r(g)
    }

    /// Checks `det_r(1) = 1`, then for every pair `(g, h)` that
    /// `det_r(gh) = det_r(g)·det_r(h)` and `det_r([g, h]) = 1`.
    pub fn verify(&self, samples: &[(PeriodicMatrix, PeriodicMatrix)]) -> HomothetyReport {
        let f = self.rd.field();
        let mut report = HomothetyReport::default();
        match self.image(&PeriodicMatrix::identity(f)) {
            Ok(v) if f.is_one(&v) => {}
            other => report.counterexamples.push(Counterexample {
                sample: 0,
                violation: Violation::Unit,
                detail: alloc::format!("det_r(1) = {other:?}"),
            }),
        }
        for (idx, (g, h)) in samples.iter().enumerate() {
            report.checked += 1;
            let mut fail = |violation, detail: String| {
                report.counterexamples.push(Counterexample {
                    sample: idx,
                    violation,
                    detail,
                })
            };
            let (dg, dh) = match (self.image(g), self.image(h)) {
                (Ok(a), Ok(b)) if !f.is_zero(&a) && !f.is_zero(&b) => (a, b),
                _ => {
                    fail(Violation::InvalidSample, "sample is singular or outside M_s^p".into());
                    continue;
                }
            };
            let prod = g.mul(h).map_err(HomothetyError::from).and_then(|gh| self.image(&gh));
            match prod {
                Ok(v) if v == f.mul(&dg, &dh) => {}
                other => fail(Violation::Multiplicativity, alloc::format!("det_r(gh) = {other:?}")),
            }
            let comm = commutator(g, h)
                .map_err(|_| HomothetyError::Matrix(MatrixError::Singular))
                .and_then(|c| self.image(&c));
            match comm {
                Ok(v) if f.is_one(&v) => {}
                other => fail(Violation::Commutator, alloc::format!("det_r([g,h]) = {other:?}")),
            }
        }
        report
    }
}
