//! Sections of the auxiliary kernel `K'` for genus 13 and the sextic `Delta`
//! cutting out its degeneracy locus on the cubic surface.
//!
//! Everything is computed on the plane model: a section at twist `l` is a
//! pair `(a, b)` with `a` in `|(l+1)H|`, `b` in `|lH - G|` and
//! `a*l0 + b*psi` vanishing on the curve, where `G = 2L - E1 - ... - E5`.

use std::sync::Arc;

use serde::Serialize;

use super::{CohomologyError, Result};
use crate::exactla::{FieldMatrix, Fp};
use crate::forms::{self, Form};
use crate::geometry::{normalize, CubicSurfaceModel, DivisorClass, PlanePoint, RationalPlaneCurve};

/// Class `G = 2L - E1 - ... - E5`.
pub const GAMMA: DivisorClass = DivisorClass::new(2, [1, 1, 1, 1, 1, 0]);
/// Class of `psi`: `H + L + G`.
pub const PSI: DivisorClass = DivisorClass::new(6, [2, 2, 2, 2, 2, 1]);
/// Class of the sextic `Delta`.
pub const DELTA: DivisorClass = DivisorClass::new(6, [1, 1, 1, 3, 3, 3]);

/// Plane data defining the two-term map onto the curve.
#[derive(Debug, Clone)]
pub struct KPrimeData {
    pub surface: Arc<CubicSurfaceModel>,
    /// Plane model of the quartic curve.
    pub curve: RationalPlaneCurve,
    /// Linear form of the line `L0`.
    pub ell0: Form,
    pub psi: Form,
}

/// Basis of `H0(K'(l))` as pairs of plane forms.
#[derive(Debug, Clone)]
pub struct KPrimeSections {
    pub twist: i64,
    pub a: Vec<Form>,
    pub b: Vec<Form>,
    points: [PlanePoint; 6],
    curve_equation: Form,
}

fn system_if_effective(surface: &CubicSurfaceModel, class: &DivisorClass) -> Vec<Form> {
    if class.a < 0 {
        return Vec::new();
    }
    surface.system(class, &[])
}

impl KPrimeData {
    pub fn a_class(l: i64) -> DivisorClass {
        DivisorClass::hyperplane().scale(l + 1)
    }

    pub fn b_class(l: i64) -> DivisorClass {
        DivisorClass::hyperplane().scale(l).sub(&GAMMA)
    }

    /// Matrix from `(a, b)` coefficients to binary forms on the curve, with
    /// the two source bases.
    fn restriction_map(&self, l: i64) -> Result<(FieldMatrix, Vec<Form>, Vec<Form>)> {
        let f = self.surface.field;
        let a_sys = system_if_effective(&self.surface, &Self::a_class(l));
        let b_sys = system_if_effective(&self.surface, &Self::b_class(l));
        let ell0 = self.curve.restrict(&self.ell0, &DivisorClass::line())?;
        let psi = self.curve.restrict(&self.psi, &PSI)?;
        let target = Self::a_class(l).add(&DivisorClass::line()).dot(&self.curve.class);
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for a in &a_sys {
            cols.push(self.curve.restrict(a, &Self::a_class(l))?.mul(&ell0).coeffs().to_vec());
        }
        for b in &b_sys {
            cols.push(self.curve.restrict(b, &Self::b_class(l))?.mul(&psi).coeffs().to_vec());
        }
        let rows = (target + 1).max(0) as usize;
        if cols.iter().any(|c| c.len() != rows) {
            return Err(CohomologyError::Precondition("restricted degrees disagree".into()));
        }
        Ok((FieldMatrix::from_columns(f, rows, &cols), a_sys, b_sys))
    }

    pub fn sections(&self, l: i64) -> Result<KPrimeSections> {
        let f = self.surface.field;
        let (m, a_sys, b_sys) = self.restriction_map(l)?;
        let ker = m.kernel_basis();
        let na = a_sys.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for v in ker.columns() {
            a.push(combine(f, &a_sys, &v[..na], Self::a_class(l).a));
            b.push(combine(f, &b_sys, &v[na..], Self::b_class(l).a));
        }
        Ok(KPrimeSections {
            twist: l,
            a,
            b,
            points: self.surface.config.points,
            curve_equation: self.curve.equation.clone(),
        })
    }

    /// `h0(K'(l))` as the kernel dimension.
    pub fn h0(&self, l: i64) -> Result<usize> {
        Ok(self.restriction_map(l)?.0.nullity())
    }
}

fn combine(f: Fp, sys: &[Form], c: &[u32], degree: i64) -> Form {
    if sys.is_empty() {
        return Form::zero(f, 3, degree.max(0) as usize);
    }
    Form::combination(f, sys, c)
}

impl KPrimeSections {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Corank of the evaluation map at a plane point off the curve and the
    /// six blown-up points.
    pub fn ev_corank_at(&self, y: &PlanePoint) -> Result<usize> {
        let f = self.curve_equation.field();
        let y = normalize(f, *y);
        if self.points.iter().any(|p| normalize(f, *p) == y) || self.curve_equation.eval(&y) == 0 {
            return Err(CohomologyError::InvalidSamplePoint);
        }
        let rows: Vec<Vec<u32>> = self.a.iter().zip(&self.b).map(|(a, b)| vec![a.eval(&y), b.eval(&y)]).collect();
        let r = FieldMatrix::from_rows(f, 2, &rows).rank();
        Ok(2 - r)
    }
}

/// Evidence that `Delta` is the unique sextic in its class restricting to
/// `psi` on `L0`, and that the six points `W` are simple points of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCertificate {
    pub source_dim: usize,
    pub restriction_rank: usize,
    pub w_degree: usize,
    pub w_squarefree: bool,
    pub w_rational: usize,
    pub simple_points: usize,
    #[serde(skip)]
    pub delta: Option<Form>,
    #[serde(skip)]
    pub w_points: Vec<PlanePoint>,
}

impl DeltaCertificate {
    pub fn passes(&self) -> bool {
        self.source_dim == 7
            && self.restriction_rank == 7
            && self.w_degree == 6
            && self.w_squarefree
            && self.w_rational == 6
            && self.simple_points == 6
    }
}

/// Builds `Delta` from `psi|L0` by solving the restriction system.
pub fn delta_certificate(
    surface: &CubicSurfaceModel,
    line0: &RationalPlaneCurve,
    psi: &Form,
) -> Result<DeltaCertificate> {
    let f = surface.field;
    let sys = surface.system(&DELTA, &[]);
    let w = line0.restrict(psi, &PSI)?;
    let cols: Vec<Vec<u32>> =
        sys.iter().map(|d| line0.restrict(d, &DELTA).map(|g| g.coeffs().to_vec())).collect::<std::result::Result<_, _>>()?;
    let rows = w.coeffs().len();
    let m = FieldMatrix::from_columns(f, rows, &cols);
    let restriction_rank = m.rank();
    let roots = forms::roots_in_fp(&w);
    let w_points: Vec<PlanePoint> = roots.iter().map(|r| line0.point_at(*r)).collect();
    let delta = m.solve(w.coeffs()).map(|c| Form::combination(f, &sys, &c));
    let simple_points = match &delta {
        Some(d) => w_points
            .iter()
            .filter(|p| d.eval(*p) == 0 && !d.taylor_coeff(*p, 1).is_zero())
            .count(),
        None => 0,
    };
    Ok(DeltaCertificate {
        source_dim: sys.len(),
        restriction_rank,
        w_degree: w.degree(),
        w_squarefree: forms::is_squarefree(&w),
        w_rational: roots.len(),
        simple_points,
        delta,
        w_points,
    })
}
