//! Constructions shared by the genus scenarios: the cubic surface, the
//! nodal plane model of `C`, the line `L0` and a section `psi` chosen by
//! prescribing its zeros on `L0`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::PipelineError;
use crate::cohomology::GAMMA;
use crate::exactla::{FieldMatrix, Fp};
use crate::forms::{self, Form};
use crate::geometry::{
    self, build_surface, nodal_curve, CubicSurfaceModel, DivisorClass, NodalSystem, RationalPlaneCurve,
    SpaceCurve, SpacePoint,
};

/// Runs `step` until it yields a value, at most `max` times.
pub fn retry<T>(
    gate: &str,
    max: u32,
    mut step: impl FnMut() -> Result<Option<T>, PipelineError>,
) -> Result<(T, u32), PipelineError> {
    for attempt in 1..=max {
        if let Some(v) = step()? {
            return Ok((v, attempt));
        }
    }
    Err(PipelineError::RetriesExhausted { gate: gate.to_string(), attempts: max })
}

/// Surface, curve and the line `L0` with its preimage `C0`.
#[derive(Debug, Clone)]
pub struct PlaneSetup {
    pub surface: Arc<CubicSurfaceModel>,
    pub plane_curve: RationalPlaneCurve,
    pub curve: Arc<SpaceCurve>,
    pub line0: RationalPlaneCurve,
    pub ell0: Form,
    pub c0: Arc<SpaceCurve>,
    /// Failed draws summed over all gates.
    pub retries: u32,
}

impl PlaneSetup {
    pub fn field(&self) -> Fp {
        self.surface.field
    }

    /// `C-bar` restricted to `L0`: its roots are the points of `C` on `C0`.
    pub fn curve_on_line0(&self) -> Form {
        self.plane_curve.equation.compose(&self.line0.phi)
    }

    /// `s = phi0|C`.
    pub fn s(&self) -> Result<Form, PipelineError> {
        Ok(self.plane_curve.restrict(&self.ell0, &DivisorClass::line())?)
    }

    /// Strict transform of the line through `P_i` and `P_j`, a line in P3.
    pub fn exceptional_line(&self, i: usize, j: usize) -> Result<Arc<SpaceCurve>, PipelineError> {
        let plane = RationalPlaneCurve::line(&self.surface, self.surface.point(i), self.surface.point(j))?;
        Ok(Arc::new(SpaceCurve::from_plane(&self.surface, plane)?))
    }

    /// Image in P3 of the point of `L0` with parameter `t`.
    pub fn point_on_c0(&self, t: [u32; 2]) -> SpacePoint {
        self.surface.image(&self.line0.point_at(t))
    }
}

/// Builds the surface, a nodal curve of the given system and a general
/// line `L0`: off the six points, meeting `C-bar` in distinct points and
/// meeting the conic through `P1..P5` away from `C-bar`.
pub fn plane_setup(
    field: Fp,
    system: NodalSystem,
    rng: &mut ChaCha8Rng,
    max: u32,
) -> Result<PlaneSetup, PipelineError> {
    let mut retries = 0;
    let ((surface, curve, plane_curve), a) = retry("surface and curve", max, || {
        let (surface, sa) = match build_surface(field, rng, max) {
            Ok(s) => s,
            Err(_) => return Ok(None),
        };
        retries += sa - 1;
        let plane = match nodal_curve(&surface, system, rng, max) {
            Ok((c, ca)) => {
                retries += ca - 1;
                c
            }
            Err(_) => return Ok(None),
        };
        let Ok(space) = SpaceCurve::from_plane(&surface, plane.clone()) else { return Ok(None) };
        Ok(Some((Arc::new(surface), Arc::new(space), plane)))
    })?;
    retries += a - 1;
    let gamma = surface.system(&GAMMA, &[]);
    let ((line0, ell0, c0), a) = retry("line L0", max, || {
        let p = geometry::random_plane_point(field, rng);
        let q = geometry::random_plane_point(field, rng);
        let Ok(line) = RationalPlaneCurve::line(&surface, p, q) else { return Ok(None) };
        if line.class != DivisorClass::line() {
            return Ok(None);
        }
        let on_curve = plane_curve.equation.compose(&line.phi);
        if on_curve.is_zero() || !forms::is_squarefree(&on_curve) {
            return Ok(None);
        }
        if let Some(g) = gamma.first() {
            let on_gamma = g.compose(&line.phi);
            if forms::gcd(&on_gamma, &on_curve).degree() > 0 {
                return Ok(None);
            }
        }
        let ell0 = geometry::line_through(field, p, q);
        let Ok(c0) = SpaceCurve::from_plane(&surface, line.clone()) else { return Ok(None) };
        Ok(Some((line, ell0, Arc::new(c0))))
    })?;
    retries += a - 1;
    Ok(PlaneSetup { surface, plane_curve, curve, line0, ell0, c0, retries })
}

/// Distinct random parameters on `L0` avoiding the zeros of `avoid`.
pub fn random_params(field: Fp, n: usize, avoid: &[Form], rng: &mut ChaCha8Rng) -> Vec<[u32; 2]> {
    let mut out: Vec<[u32; 2]> = Vec::with_capacity(n);
    while out.len() < n {
        let t = [1, rng.gen_range(0..field.p())];
        if out.contains(&t) || avoid.iter().any(|f| f.eval(&t) == 0) {
            continue;
        }
        out.push(t);
    }
    out
}

/// A member of `class` whose restriction to `L0` vanishes exactly at
/// `params`: a particular solution plus a random element of the kernel.
pub fn section_with_zeros(
    setup: &PlaneSetup,
    class: &DivisorClass,
    params: &[[u32; 2]],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Form>, PipelineError> {
    let f = setup.field();
    let sys = setup.surface.system(class, &[]);
    let target = forms::from_roots(f, params);
    let cols: Vec<Vec<u32>> = sys
        .iter()
        .map(|m| setup.line0.restrict(m, class).map(|g| g.coeffs().to_vec()))
        .collect::<Result<_, _>>()?;
    if target.degree() as i64 != class.dot(&setup.line0.class) {
        return Ok(None);
    }
    let m = FieldMatrix::from_columns(f, target.coeffs().len(), &cols);
    let Some(x) = m.solve(target.coeffs()) else { return Ok(None) };
    let ker = m.kernel_basis();
    let mut c = x;
    for v in ker.columns() {
        let lambda = f.random(rng);
        for (ci, vi) in c.iter_mut().zip(&v) {
            *ci = f.add(*ci, f.mul(lambda, *vi));
        }
    }
    Ok(Some(Form::combination(f, &sys, &c)))
}

/// Random rational curve of degree `e` spanning P3.
pub fn random_rational_curve(field: Fp, e: usize, rng: &mut ChaCha8Rng, max: u32) -> Result<(Arc<SpaceCurve>, u32), PipelineError> {
    retry("rational curve", max, || {
        let nu: [Form; 4] = std::array::from_fn(|_| Form::random(field, 2, e, rng));
        let Ok(c) = SpaceCurve::new(nu) else { return Ok(None) };
        Ok((c.span_rank() == 4.min(e + 1)).then(|| Arc::new(c)))
    })
}

/// Random squarefree binary form of degree `d`.
pub fn random_squarefree(field: Fp, d: usize, rng: &mut ChaCha8Rng, max: u32) -> Result<(Form, u32), PipelineError> {
    retry("squarefree section", max, || {
        let s = Form::random(field, 2, d, rng);
        Ok((s.degree() == d && !s.is_zero() && forms::is_squarefree(&s)).then_some(s))
    })
}

/// Two random independent members of a two-dimensional system.
pub fn pencil_pair(field: Fp, sys: &[Form], rng: &mut ChaCha8Rng) -> Option<[Form; 2]> {
    if sys.len() != 2 {
        return None;
    }
    let a = geometry::random_member(field, sys, rng);
    let b = geometry::random_member(field, sys, rng);
    let rows: Vec<Vec<u32>> = vec![a.coeffs().to_vec(), b.coeffs().to_vec()];
    (geometry::point_rank(field, &rows) == 2).then_some([a, b])
}
