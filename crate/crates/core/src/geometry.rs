//! The cubic surface as the plane blown up in six points, plane curves with
//! assigned base points, and their images as rational space curves.

use rand::Rng;
use serde::Serialize;

use crate::exactla::{FieldMatrix, Fp};
use crate::forms::{self, basis, binomial, dim_forms, Form, FormsError};

pub type PlanePoint = [u32; 3];
pub type SpacePoint = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate point configuration after {0} attempts")]
    DegenerateConfiguration(u32),
    #[error("linear system has dimension {found}, expected {expected}")]
    SystemDimension { expected: usize, found: usize },
    #[error("inconsistent multiplicities")]
    InconsistentMultiplicities,
    #[error("section does not contain required base locus")]
    MissingBaseLocus,
    #[error("pencil degeneration")]
    PencilDegeneration,
    #[error("no smooth rational point found")]
    NoRationalPoint,
    #[error("retries exhausted at gate `{gate}` after {attempts} attempts")]
    RetriesExhausted { gate: String, attempts: u32 },
    #[error("unsupported disjointness test between two curves of degree > 1")]
    UnsupportedDisjointness,
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// Divisor class `aL - sum m_i E_i` on the blown-up plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    pub a: i64,
    pub m: [i64; 6],
}

impl DivisorClass {
    pub const fn new(a: i64, m: [i64; 6]) -> Self {
        DivisorClass { a, m }
    }

    /// Pullback of a line.
    pub const fn line() -> Self {
        Self::new(1, [0; 6])
    }

    /// The hyperplane class `3L - sum E_i`.
    pub const fn hyperplane() -> Self {
        Self::new(3, [1; 6])
    }

    /// Exceptional curve `E_i` (zero-based index).
    pub fn exceptional(i: usize) -> Self {
        let mut m = [0; 6];
        m[i] = -1;
        Self::new(0, m)
    }

    /// Intersection number under the form `diag(1, -1, ..., -1)`.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        self.a * other.a - self.m.iter().zip(&other.m).map(|(x, y)| x * y).sum::<i64>()
    }

    pub fn add(&self, other: &DivisorClass) -> Self {
        let mut m = self.m;
        for (x, y) in m.iter_mut().zip(&other.m) {
            *x += y;
        }
        Self::new(self.a + other.a, m)
    }

    pub fn sub(&self, other: &DivisorClass) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.a * k, self.m.map(|x| x * k))
    }
}

pub fn normalize<const N: usize>(field: Fp, p: [u32; N]) -> [u32; N] {
    let Some(&lead) = p.iter().find(|&&c| c != 0) else {
        return p;
    };
    let inv = field.inv(lead);
    p.map(|c| field.mul(c, inv))
}

pub fn random_plane_point<R: Rng + ?Sized>(field: Fp, rng: &mut R) -> PlanePoint {
    loop {
        let p = [field.random(rng), field.random(rng), field.random(rng)];
        if p != [0, 0, 0] {
            return normalize(field, p);
        }
    }
}

pub fn random_space_point<R: Rng + ?Sized>(field: Fp, rng: &mut R) -> SpacePoint {
    loop {
        let p = [field.random(rng), field.random(rng), field.random(rng), field.random(rng)];
        if p != [0, 0, 0, 0] {
            return normalize(field, p);
        }
    }
}

/// Rank of a list of points viewed as vectors.
pub fn point_rank(field: Fp, points: &[Vec<u32>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    FieldMatrix::from_rows(field, points[0].len(), points).rank()
}

pub fn collinear(field: Fp, points: &[Vec<u32>]) -> bool {
    point_rank(field, points) <= 2
}

pub fn coplanar(field: Fp, points: &[Vec<u32>]) -> bool {
    point_rank(field, points) <= 3
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn no_three_collinear(field: Fp, points: &[Vec<u32>]) -> bool {
    subsets(points.len(), 3).iter().all(|s| {
        let pts: Vec<Vec<u32>> = s.iter().map(|&i| points[i].clone()).collect();
        !collinear(field, &pts)
    })
}

pub fn no_four_coplanar(field: Fp, points: &[Vec<u32>]) -> bool {
    subsets(points.len(), 4).iter().all(|s| {
        let pts: Vec<Vec<u32>> = s.iter().map(|&i| points[i].clone()).collect();
        !coplanar(field, &pts)
    })
}

/// True iff the quadric vanishes at none of the points.
pub fn off_quadric(points: &[SpacePoint], quadric: &Form) -> bool {
    points.iter().all(|p| quadric.eval(p) != 0)
}

/// True iff no point lies on the curve.
pub fn distinct_from_curve(points: &[SpacePoint], curve: &SpaceCurve) -> bool {
    points.iter().all(|p| !curve.contains(p))
}

/// Gcd of the 2x2 minors of `(maps || point)`: vanishes exactly at the
/// parameters mapping to `point`.
pub fn preimage_factor(maps: &[Form], point: &[u32]) -> Form {
    let field = maps[0].field();
    let mut minors = Vec::new();
    for a in 0..maps.len() {
        for b in (a + 1)..maps.len() {
            minors.push(maps[a].scale(point[b]).sub(&maps[b].scale(point[a])));
        }
    }
    let g = forms::gcd_all(&minors);
    if g.is_zero() {
        // Constant map onto the point; never happens for curves built here.
        Form::constant(field, 2, 1).scale(0)
    } else {
        g
    }
}

/// Linear forms of a plane: cross product of two points.
pub fn line_through(field: Fp, a: PlanePoint, b: PlanePoint) -> Form {
    let c = [
        field.sub(field.mul(a[1], b[2]), field.mul(a[2], b[1])),
        field.sub(field.mul(a[2], b[0]), field.mul(a[0], b[2])),
        field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0])),
    ];
    Form::linear(field, &c)
}

/// Linear map `(s, t) -> s*a + t*b` as three binary linear forms.
fn segment_map<const N: usize>(field: Fp, a: [u32; N], b: [u32; N]) -> Vec<Form> {
    (0..N).map(|i| Form::linear(field, &[a[i], b[i]])).collect()
}

/// Conditions "multiplicity >= m at P" on plane forms of degree `degree`:
/// all Hasse derivatives of order `m - 1` vanish at `P`.
fn multiplicity_rows(field: Fp, degree: usize, point: &PlanePoint, mult: u32) -> Vec<Vec<u32>> {
    if mult == 0 {
        return Vec::new();
    }
    let k = (mult - 1) as usize;
    if k > degree {
        // Impossible multiplicity: only the zero form qualifies.
        return (0..dim_forms(3, degree as i64))
            .map(|j| {
                let mut r = vec![0; dim_forms(3, degree as i64)];
                r[j] = 1;
                r
            })
            .collect();
    }
    let src = basis(3, degree);
    let der = basis(3, k);
    der.iter()
        .map(|beta| {
            src.iter()
                .map(|alpha| {
                    if alpha.iter().zip(beta).any(|(a, b)| a < b) {
                        return 0;
                    }
                    let mut v = 1u32;
                    for i in 0..3 {
                        let c = binomial(alpha[i] as i64, beta[i] as i64);
                        v = field.mul(v, field.from_i64(c));
                        v = field.mul(v, field.pow(point[i], (alpha[i] - beta[i]) as u64));
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Basis of plane forms of `degree` with multiplicity at least `m` at each listed point.
pub fn linear_system(field: Fp, degree: usize, conditions: &[(PlanePoint, u32)]) -> Vec<Form> {
    let n = dim_forms(3, degree as i64);
    let rows: Vec<Vec<u32>> = conditions
        .iter()
        .flat_map(|(p, m)| multiplicity_rows(field, degree, p, *m))
        .collect();
    let k = if rows.is_empty() {
        FieldMatrix::identity(field, n)
    } else {
        FieldMatrix::from_rows(field, n, &rows).kernel_basis()
    };
    k.columns().into_iter().map(|c| Form::from_coeffs(field, 3, degree, c)).collect()
}

/// Linear system attached to a divisor class, optionally with extra simple base points.
pub fn class_system(
    field: Fp,
    config: &PlaneConfig,
    class: &DivisorClass,
    extra: &[PlanePoint],
) -> Vec<Form> {
    let mut conds: Vec<(PlanePoint, u32)> =
        config.points.iter().zip(class.m).map(|(p, m)| (*p, m.max(0) as u32)).collect();
    conds.extend(extra.iter().map(|p| (*p, 1)));
    linear_system(field, class.a as usize, &conds)
}

/// Random element of the span of a basis.
pub fn random_member<R: Rng + ?Sized>(field: Fp, system: &[Form], rng: &mut R) -> Form {
    let c: Vec<u32> = system.iter().map(|_| field.random(rng)).collect();
    Form::combination(field, system, &c)
}

/// Six points of the plane in general position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneConfig {
    pub points: [PlanePoint; 6],
}

impl PlaneConfig {
    /// No three collinear and not all six on a conic.
    pub fn is_general(&self, field: Fp) -> bool {
        let pts: Vec<Vec<u32>> = self.points.iter().map(|p| p.to_vec()).collect();
        if !no_three_collinear(field, &pts) {
            return false;
        }
        let conic_rows: Vec<Vec<u32>> = self
            .points
            .iter()
            .map(|p| basis(3, 2).iter().map(|e| Form::monomial(field, e, 1).eval(p)).collect())
            .collect();
        FieldMatrix::from_rows(field, 6, &conic_rows).rank() == 6
    }
}

/// The cubic surface `X` as the image of the plane under cubics through six points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicSurfaceModel {
    pub field: Fp,
    pub config: PlaneConfig,
    /// Basis of plane cubics through the six points: the map to P3.
    pub cubics: [Form; 4],
    /// Cubic equation of the image surface.
    pub equation: Form,
}

impl CubicSurfaceModel {
    /// Builds the model from given points, or reports why they are unusable.
    pub fn from_config(field: Fp, config: PlaneConfig) -> Result<Self, GeometryError> {
        if !config.is_general(field) {
            return Err(GeometryError::DegenerateConfiguration(1));
        }
        let sys = linear_system(field, 3, &config.points.map(|p| (p, 1)));
        if sys.len() != 4 {
            return Err(GeometryError::SystemDimension { expected: 4, found: sys.len() });
        }
        let cubics: [Form; 4] = sys.try_into().expect("four cubics");
        let eq = forms::substitution_matrix(&cubics, 3).kernel_basis();
        if eq.cols() != 1 {
            return Err(GeometryError::SystemDimension { expected: 1, found: eq.cols() });
        }
        let equation = Form::from_coeffs(field, 4, 3, eq.column(0));
        Ok(CubicSurfaceModel { field, config, cubics, equation })
    }

    /// Image in P3 of a plane point away from the six base points.
    pub fn image(&self, y: &PlanePoint) -> SpacePoint {
        normalize(self.field, [0, 1, 2, 3].map(|i| self.cubics[i].eval(y)))
    }

    pub fn point(&self, i: usize) -> PlanePoint {
        self.config.points[i]
    }

    pub fn system(&self, class: &DivisorClass, extra: &[PlanePoint]) -> Vec<Form> {
        class_system(self.field, &self.config, class, extra)
    }

    /// Plane model of a linear form on P3: its pullback, of class `H`.
    pub fn pullback_linear(&self, l: &Form) -> Form {
        l.compose(&self.cubics)
    }
}

/// Random general six points with the surface they define.
pub fn build_surface<R: Rng + ?Sized>(
    field: Fp,
    rng: &mut R,
    max_attempts: u32,
) -> Result<(CubicSurfaceModel, u32), GeometryError> {
    for attempt in 1..=max_attempts {
        let config = PlaneConfig { points: std::array::from_fn(|_| random_plane_point(field, rng)) };
        if let Ok(s) = CubicSurfaceModel::from_config(field, config) {
            return Ok((s, attempt));
        }
    }
    Err(GeometryError::DegenerateConfiguration(max_attempts))
}

/// Rational plane curve with parametrization and its behaviour at the six points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPlaneCurve {
    pub equation: Form,
    pub phi: [Form; 3],
    /// Class on the blown-up plane, with multiplicities read off the parametrization.
    pub class: DivisorClass,
    /// For each blow-up point, the binary form vanishing at the parameters
    /// of the branches through it. Its degree is the multiplicity there.
    pub branches: [Form; 6],
}

impl RationalPlaneCurve {
    /// Validates `equation(phi) = 0`, no base points, and records branch data.
    pub fn new(surface: &CubicSurfaceModel, equation: Form, phi: [Form; 3]) -> Result<Self, GeometryError> {
        if forms::gcd_all(&phi).degree() > 0 {
            return Err(GeometryError::PencilDegeneration);
        }
        if !equation.compose(&phi).is_zero() || phi[0].degree() != equation.degree() {
            return Err(GeometryError::PencilDegeneration);
        }
        let branches: [Form; 6] = std::array::from_fn(|i| preimage_factor(&phi, &surface.point(i)));
        let m = std::array::from_fn(|i| branches[i].degree() as i64);
        let class = DivisorClass::new(equation.degree() as i64, m);
        Ok(RationalPlaneCurve { equation, phi, class, branches })
    }

    /// Parametrized line through two points.
    pub fn line(surface: &CubicSurfaceModel, a: PlanePoint, b: PlanePoint) -> Result<Self, GeometryError> {
        let f = surface.field;
        let phi: [Form; 3] = segment_map(f, a, b).try_into().expect("three forms");
        Self::new(surface, line_through(f, a, b), phi)
    }

    pub fn point_at(&self, param: [u32; 2]) -> PlanePoint {
        let f = self.phi[0].field();
        normalize(f, [0, 1, 2].map(|i| self.phi[i].eval(&param)))
    }

    /// Restriction of a plane form in `class` to this curve, as a binary form:
    /// the pullback divided by the branch factors to the required powers.
    pub fn restrict(&self, form: &Form, class: &DivisorClass) -> Result<Form, GeometryError> {
        assert_eq!(form.degree() as i64, class.a, "form degree must match class");
        let mut g = form.compose(&self.phi);
        for i in 0..6 {
            for _ in 0..class.m[i].max(0) {
                if self.branches[i].degree() == 0 {
                    break;
                }
                g = forms::exact_divide(&g, &self.branches[i]).map_err(|_| GeometryError::MissingBaseLocus)?;
            }
        }
        let expected = class.dot(&self.class);
        assert_eq!(g.degree() as i64, expected, "degree disagrees with intersection number");
        Ok(g)
    }
}

/// Curve of degree `n` with a point `p` of multiplicity `n - 1`: lines
/// through `p` meet it once more, giving a degree-`n` parametrization.
pub fn monoid_parametrization<R: Rng + ?Sized>(
    field: Fp,
    equation: &Form,
    p: &PlanePoint,
    rng: &mut R,
) -> Result<[Form; 3], GeometryError> {
    let n = equation.degree();
    let a_top = equation.clone();
    let a_sub = equation.taylor_coeff(p, n - 1);
    for k in 0..n.saturating_sub(1) {
        if !equation.taylor_coeff(p, k).is_zero() {
            return Err(GeometryError::InconsistentMultiplicities);
        }
    }
    // W runs over a random line not through p.
    let (u, v) = loop {
        let u = random_plane_point(field, rng);
        let v = random_plane_point(field, rng);
        if point_rank(field, &[p.to_vec(), u.to_vec(), v.to_vec()]) == 3 {
            break (u, v);
        }
    };
    let w = segment_map(field, u, v);
    let top = a_top.compose(&w);
    let sub = a_sub.compose(&w);
    let phi: [Form; 3] = std::array::from_fn(|i| top.scale(p[i]).sub(&sub.mul(&w[i])));
    Ok(phi)
}

/// Rational point on a nonsingular conic by intersecting with random lines.
fn conic_point<R: Rng + ?Sized>(field: Fp, conic: &Form, rng: &mut R) -> Result<PlanePoint, GeometryError> {
    for _ in 0..64 {
        let a = random_plane_point(field, rng);
        let b = random_plane_point(field, rng);
        if a == b {
            continue;
        }
        let w = segment_map(field, a, b);
        let q = conic.compose(&w);
        if q.is_zero() {
            continue;
        }
        if let Some(r) = forms::roots_in_fp(&q).first() {
            let pt = [0, 1, 2].map(|i| w[i].eval(r));
            if pt != [0, 0, 0] {
                return Ok(normalize(field, pt));
            }
        }
    }
    Err(GeometryError::NoRationalPoint)
}

/// Parametrizes a quartic with nodes at `P1, P2, P3` by the quadratic
/// Cremona transformation centred there.
pub fn parametrize_nodal_quartic<R: Rng + ?Sized>(
    surface: &CubicSurfaceModel,
    quartic: &Form,
    rng: &mut R,
) -> Result<[Form; 3], GeometryError> {
    let f = surface.field;
    let nodes = [surface.point(0), surface.point(1), surface.point(2)];
    // T sends e_j to the j-th node.
    let t_maps: Vec<Form> =
        (0..3).map(|i| Form::linear(f, &[nodes[0][i], nodes[1][i], nodes[2][i]])).collect();
    let q_t = quartic.compose(&t_maps);
    let mut conic = Form::zero(f, 3, 2);
    let mut cc = conic.coeffs().to_vec();
    for (i, e) in basis(3, 4).iter().enumerate() {
        let c = q_t.coeffs()[i];
        if c == 0 {
            continue;
        }
        if e.iter().any(|&x| x > 2) {
            return Err(GeometryError::InconsistentMultiplicities);
        }
        cc[forms::monomial_index(&[2 - e[0], 2 - e[1], 2 - e[2]])] = c;
    }
    conic = Form::from_coeffs(f, 3, 2, cc);
    if conic_determinant(f, &conic) == 0 {
        return Err(GeometryError::PencilDegeneration);
    }
    let r = conic_point(f, &conic, rng)?;
    let x = monoid_parametrization(f, &conic, &r, rng)?;
    let phi_t = [x[1].mul(&x[2]), x[0].mul(&x[2]), x[0].mul(&x[1])];
    let phi: [Form; 3] = std::array::from_fn(|i| {
        Form::combination(f, &phi_t, &[nodes[0][i], nodes[1][i], nodes[2][i]])
    });
    Ok(phi)
}

/// Determinant of the symmetric matrix of a ternary quadratic form, up to a unit.
fn conic_determinant(field: Fp, q: &Form) -> u32 {
    let c = |e: [u32; 3]| q.coeff(&e);
    let h = field.inv(2);
    let m = [
        [c([2, 0, 0]), field.mul(h, c([1, 1, 0])), field.mul(h, c([1, 0, 1]))],
        [field.mul(h, c([1, 1, 0])), c([0, 2, 0]), field.mul(h, c([0, 1, 1]))],
        [field.mul(h, c([1, 0, 1])), field.mul(h, c([0, 1, 1])), c([0, 0, 2])],
    ];
    det3(field, &m)
}

pub fn det3(f: Fp, m: &[[u32; 3]; 3]) -> u32 {
    let t0 = f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1])));
    let t1 = f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0])));
    let t2 = f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])));
    f.add(f.sub(t0, t1), t2)
}

/// Which nodal plane model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodalSystem {
    /// Quartics with double points at `P1, P2, P3`, missing `P4, P5, P6`.
    QuarticThreeNodes,
    /// Cubics with a node at `P1`, through `P2, P3`, missing `P4, P5, P6`.
    CubicOneNode,
}

impl NodalSystem {
    pub fn class(self) -> DivisorClass {
        match self {
            NodalSystem::QuarticThreeNodes => DivisorClass::new(4, [2, 2, 2, 0, 0, 0]),
            NodalSystem::CubicOneNode => DivisorClass::new(3, [2, 1, 1, 0, 0, 0]),
        }
    }

    pub fn expected_dimension(self) -> usize {
        match self {
            NodalSystem::QuarticThreeNodes => 6,
            NodalSystem::CubicOneNode => 5,
        }
    }
}

/// Random irreducible member of a nodal system, parametrized. Returns the
/// curve and the attempts used.
pub fn nodal_curve<R: Rng + ?Sized>(
    surface: &CubicSurfaceModel,
    system: NodalSystem,
    rng: &mut R,
    max_attempts: u32,
) -> Result<(RationalPlaneCurve, u32), GeometryError> {
    let f = surface.field;
    let class = system.class();
    let sys = surface.system(&class, &[]);
    if sys.len() != system.expected_dimension() {
        return Err(GeometryError::SystemDimension { expected: system.expected_dimension(), found: sys.len() });
    }
    for attempt in 1..=max_attempts {
        let eq = random_member(f, &sys, rng);
        if (3..6).any(|i| eq.eval(&surface.point(i)) == 0) {
            continue;
        }
        let phi = match system {
            NodalSystem::QuarticThreeNodes => parametrize_nodal_quartic(surface, &eq, rng),
            NodalSystem::CubicOneNode => monoid_parametrization(f, &eq, &surface.point(0), rng),
        };
        let Ok(phi) = phi else { continue };
        let Ok(curve) = RationalPlaneCurve::new(surface, eq, phi) else { continue };
        // Exactly the assigned multiplicities: nodes have two distinct branches.
        if curve.class != class {
            continue;
        }
        let nodes_ok = (0..6)
            .filter(|&i| class.m[i] == 2)
            .all(|i| forms::is_squarefree(&curve.branches[i]));
        if nodes_ok {
            return Ok((curve, attempt));
        }
    }
    Err(GeometryError::RetriesExhausted { gate: "nodal curve".into(), attempts: max_attempts })
}

/// The conic through `P1..P5`, parametrized from `P1`.
pub fn conic_through_five(
    surface: &CubicSurfaceModel,
    rng: &mut impl Rng,
) -> Result<RationalPlaneCurve, GeometryError> {
    let f = surface.field;
    let class = DivisorClass::new(2, [1, 1, 1, 1, 1, 0]);
    let sys = surface.system(&class, &[]);
    if sys.len() != 1 {
        return Err(GeometryError::SystemDimension { expected: 1, found: sys.len() });
    }
    let phi = monoid_parametrization(f, &sys[0], &surface.point(0), rng)?;
    RationalPlaneCurve::new(surface, sys[0].clone(), phi)
}

/// A rational curve in P3 given by four binary forms without common zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceCurve {
    pub nu: [Form; 4],
    /// Plane model when the curve lies on the surface.
    pub plane: Option<RationalPlaneCurve>,
}

impl SpaceCurve {
    pub fn new(nu: [Form; 4]) -> Result<Self, GeometryError> {
        if forms::gcd_all(&nu).degree() > 0 {
            return Err(FormsError::BasePoints.into());
        }
        Ok(SpaceCurve { nu, plane: None })
    }

    /// Strict transform of a plane curve: cubics composed with the
    /// parametrization, divided by the branch factors.
    pub fn from_plane(surface: &CubicSurfaceModel, plane: RationalPlaneCurve) -> Result<Self, GeometryError> {
        let h = DivisorClass::hyperplane();
        let mut nu = Vec::with_capacity(4);
        for c in &surface.cubics {
            nu.push(plane.restrict(c, &h).map_err(|_| GeometryError::InconsistentMultiplicities)?);
        }
        let nu: [Form; 4] = nu.try_into().expect("four forms");
        if forms::gcd_all(&nu).degree() > 0 {
            return Err(GeometryError::InconsistentMultiplicities);
        }
        Ok(SpaceCurve { nu, plane: Some(plane) })
    }

    pub fn line(field: Fp, a: SpacePoint, b: SpacePoint) -> Result<Self, GeometryError> {
        let nu: [Form; 4] = segment_map(field, a, b).try_into().expect("four forms");
        Self::new(nu)
    }

    pub fn field(&self) -> Fp {
        self.nu[0].field()
    }

    pub fn degree(&self) -> usize {
        self.nu[0].degree()
    }

    pub fn point_at(&self, param: [u32; 2]) -> SpacePoint {
        normalize(self.field(), [0, 1, 2, 3].map(|i| self.nu[i].eval(&param)))
    }

    /// Rank of the coefficient matrix; 4 iff the curve spans P3.
    pub fn span_rank(&self) -> usize {
        let rows: Vec<Vec<u32>> = self.nu.iter().map(|f| f.coeffs().to_vec()).collect();
        FieldMatrix::from_rows(self.field(), self.degree() + 1, &rows).rank()
    }

    /// Restriction `S_l -> H0(O_P1(e l))`.
    pub fn pullback(&self, l: usize) -> FieldMatrix {
        forms::pullback_matrix(&self.nu, l).expect("curves are base-point free")
    }

    pub fn restrict_form(&self, g: &Form) -> Form {
        g.compose(&self.nu)
    }

    pub fn contains(&self, p: &SpacePoint) -> bool {
        preimage_factor(&self.nu, p).degree() > 0
    }

    /// Two linear forms cutting out a line.
    pub fn line_equations(&self) -> Option<[Form; 2]> {
        if self.degree() != 1 {
            return None;
        }
        let k = self.pullback(1).kernel_basis();
        debug_assert_eq!(k.cols(), 2);
        Some([0, 1].map(|j| Form::from_coeffs(self.field(), 4, 1, k.column(j))))
    }

    /// Disjointness test when at least one curve is a line.
    pub fn disjoint_from(&self, other: &SpaceCurve) -> Result<bool, GeometryError> {
        let (line, curve) = if self.degree() == 1 {
            (self, other)
        } else if other.degree() == 1 {
            (other, self)
        } else {
            return Err(GeometryError::UnsupportedDisjointness);
        };
        let [l1, l2] = line.line_equations().expect("degree-one curve");
        let g = forms::gcd(&curve.restrict_form(&l1), &curve.restrict_form(&l2));
        Ok(g.degree() == 0 && !g.is_zero())
    }
}

/// Restriction of a plane form in `class` to a curve with a plane model.
pub fn restrict_to_curve(form: &Form, class: &DivisorClass, target: &SpaceCurve) -> Result<Form, GeometryError> {
    let plane = target.plane.as_ref().ok_or(GeometryError::MissingBaseLocus)?;
    plane.restrict(form, class)
}

/// The coefficient-level degree of a class on a curve: `a deg - sum m_i mult_i`.
pub fn intersection(class: &DivisorClass, curve: &RationalPlaneCurve) -> i64 {
    class.dot(&curve.class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> Fp {
        Fp::new(32003).unwrap()
    }

    fn surface(seed: u64) -> CubicSurfaceModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        build_surface(field(), &mut rng, 8).unwrap().0
    }

    #[test]
    fn surface_has_four_cubics_and_one_equation() {
        let s = surface(1);
        assert_eq!(s.cubics.len(), 4);
        for c in &s.cubics {
            for p in &s.config.points {
                assert_eq!(c.eval(p), 0);
            }
        }
        assert!(s.equation.compose(&s.cubics).is_zero());
    }

    #[test]
    fn collinear_triple_is_rejected() {
        let f = field();
        let mut s = surface(2);
        let (a, b) = (s.config.points[0], s.config.points[1]);
        s.config.points[2] = normalize(f, [0, 1, 2].map(|i| f.add(a[i], f.mul(5, b[i]))));
        assert!(!s.config.is_general(f));
        assert!(CubicSurfaceModel::from_config(f, s.config.clone()).is_err());
    }

    #[test]
    fn nodal_system_dimensions() {
        let s = surface(3);
        assert_eq!(s.system(&NodalSystem::QuarticThreeNodes.class(), &[]).len(), 6);
        assert_eq!(s.system(&NodalSystem::CubicOneNode.class(), &[]).len(), 5);
    }

    #[test]
    fn line_through_two_points_becomes_a_line() {
        let s = surface(4);
        let l = RationalPlaneCurve::line(&s, s.point(1), s.point(2)).unwrap();
        assert_eq!(l.class, DivisorClass::new(1, [0, 1, 1, 0, 0, 0]));
        let c = SpaceCurve::from_plane(&s, l).unwrap();
        assert_eq!(c.degree(), 1);
    }

    #[test]
    fn strict_transform_degrees() {
        let s = surface(5);
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let (q, _) = nodal_curve(&s, NodalSystem::QuarticThreeNodes, &mut rng, 8).unwrap();
        assert_eq!(q.phi[0].degree(), 4);
        for i in 0..3 {
            assert_eq!(q.branches[i].degree(), 2);
        }
        let c = SpaceCurve::from_plane(&s, q).unwrap();
        assert_eq!(c.degree(), 6);
        assert_eq!(c.span_rank(), 4);
        let (k, _) = nodal_curve(&s, NodalSystem::CubicOneNode, &mut rng, 8).unwrap();
        assert_eq!(SpaceCurve::from_plane(&s, k).unwrap().degree(), 5);
        let a = random_plane_point(field(), &mut rng);
        let b = random_plane_point(field(), &mut rng);
        let l0 = RationalPlaneCurve::line(&s, a, b).unwrap();
        assert_eq!(SpaceCurve::from_plane(&s, l0).unwrap().degree(), 3);
        let g6 = conic_through_five(&s, &mut rng).unwrap();
        assert_eq!(SpaceCurve::from_plane(&s, g6).unwrap().degree(), 1);
    }

    #[test]
    fn forbidden_point_member_is_detected() {
        let s = surface(6);
        let sys = s.system(&NodalSystem::QuarticThreeNodes.class(), &[s.point(3)]);
        assert_eq!(sys.len(), 5);
        assert!(sys.iter().all(|q| q.eval(&s.point(3)) == 0));
    }

    #[test]
    fn collinear_and_coplanar_predicates() {
        let f = field();
        let line = SpaceCurve::line(f, [1, 2, 3, 4], [0, 1, 0, 7]).unwrap();
        let pts: Vec<Vec<u32>> = [[1, 0], [0, 1], [1, 1]].iter().map(|p| line.point_at(*p).to_vec()).collect();
        assert!(collinear(f, &pts));
        let frame = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        assert!(!coplanar(f, &frame));
        assert!(no_four_coplanar(f, &frame));
    }

    #[test]
    fn class_arithmetic() {
        let h = DivisorClass::hyperplane();
        assert_eq!(h.dot(&h), 3);
        let quartic = NodalSystem::QuarticThreeNodes.class();
        assert_eq!(h.dot(&quartic), 6);
        assert_eq!(h.dot(&NodalSystem::CubicOneNode.class()), 5);
        assert_eq!(DivisorClass::line().dot(&quartic), 4);
    }
}
