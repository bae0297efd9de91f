//! Homogeneous forms in 2, 3 or 4 variables over F_p.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with
//! `x0` the most significant variable. For binary forms in `(s, t)` this
//! makes coefficient `i` the coefficient of `s^(d-i) t^i`, so the
//! coefficient vector of a binary form is its dehomogenization `f(1, t)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::exactla::{FieldMatrix, Fp};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("not divisible")]
    NotDivisible,
    #[error("parametrization has base points")]
    BasePoints,
    #[error("expected a binary form, got {0} variables")]
    NotBinary(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Dimension of the space of degree-`degree` forms in `nvars` variables.
pub fn dim_forms(nvars: usize, degree: i64) -> usize {
    if degree < 0 {
        return 0;
    }
    binomial(degree + nvars as i64 - 1, nvars as i64 - 1) as usize
}

/// Monomials of one degree in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    exps: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        assert!(nvars >= 1, "need at least one variable");
        let mut exps = Vec::with_capacity(dim_forms(nvars, degree as i64));
        let mut cur = vec![0u32; nvars];
        fill(&mut exps, &mut cur, 0, degree as u32);
        MonomialBasis { nvars, degree, exps }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.iter().map(|e| e.as_slice())
    }

    /// Position of a monomial, by the counting formula rather than a search.
    pub fn index_of(&self, exps: &[u32]) -> usize {
        monomial_index(exps)
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, remaining: u32) {
    if var + 1 == cur.len() {
        cur[var] = remaining;
        out.push(cur.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        cur[var] = a;
        fill(out, cur, var + 1, remaining - a);
    }
    cur[var] = 0;
}

/// Graded-lex index of a monomial among those of the same degree.
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut remaining: i64 = exps.iter().map(|&e| e as i64).sum();
    let mut idx = 0usize;
    for i in 0..n.saturating_sub(1) {
        let a = exps[i] as i64;
        // Monomials sharing the prefix but with a larger exponent at `i`.
        for b in (a + 1)..=remaining {
            idx += dim_forms(n - i - 1, remaining - b);
        }
        remaining -= a;
    }
    idx
}

/// Shared cached basis.
pub fn basis(nvars: usize, degree: usize) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("basis cache poisoned");
    guard
        .entry((nvars, degree))
        .or_insert_with(|| Arc::new(MonomialBasis::new(nvars, degree)))
        .clone()
}

/// A homogeneous form with a dense coefficient vector over its basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    field: Fp,
    nvars: usize,
    degree: usize,
    coeffs: Vec<u32>,
}

impl Form {
    pub fn zero(field: Fp, nvars: usize, degree: usize) -> Self {
        Form { field, nvars, degree, coeffs: vec![0; dim_forms(nvars, degree as i64)] }
    }

    pub fn constant(field: Fp, nvars: usize, c: u32) -> Self {
        Form { field, nvars, degree: 0, coeffs: vec![c % field.p()] }
    }

    pub fn from_coeffs(field: Fp, nvars: usize, degree: usize, coeffs: Vec<u32>) -> Self {
        assert_eq!(coeffs.len(), dim_forms(nvars, degree as i64), "coefficient count");
        let coeffs = coeffs.into_iter().map(|c| c % field.p()).collect();
        Form { field, nvars, degree, coeffs }
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(field: Fp, coeffs: &[u32]) -> Self {
        Self::from_coeffs(field, coeffs.len(), 1, coeffs.to_vec())
    }

    pub fn var(field: Fp, nvars: usize, i: usize) -> Self {
        let mut c = vec![0; nvars];
        c[i] = 1;
        Self::linear(field, &c)
    }

    pub fn monomial(field: Fp, exps: &[u32], c: u32) -> Self {
        let degree = exps.iter().sum::<u32>() as usize;
        let mut f = Self::zero(field, exps.len(), degree);
        f.coeffs[monomial_index(exps)] = c % field.p();
        f
    }

    pub fn random<R: Rng + ?Sized>(field: Fp, nvars: usize, degree: usize, rng: &mut R) -> Self {
        let n = dim_forms(nvars, degree as i64);
        Form { field, nvars, degree, coeffs: (0..n).map(|_| field.random(rng)).collect() }
    }

    /// Linear combination `sum c_i * forms[i]` of forms sharing a shape.
    pub fn combination(field: Fp, forms: &[Form], c: &[u32]) -> Self {
        assert_eq!(forms.len(), c.len());
        assert!(!forms.is_empty(), "empty combination");
        let mut out = Form::zero(field, forms[0].nvars, forms[0].degree);
        for (f, &a) in forms.iter().zip(c) {
            out = out.add(&f.scale(a));
        }
        out
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.coeffs[monomial_index(exps)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_shape(&self, other: &Form) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.same_shape(other);
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Form { coeffs, ..self.clone() }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.same_shape(other);
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        Form { coeffs, ..self.clone() }
    }

    pub fn scale(&self, c: u32) -> Form {
        let f = self.field;
        Form { coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Form {
        let f = self.field;
        Form { coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let f = self.field;
        let p = f.p() as u64;
        let ba = basis(self.nvars, self.degree);
        let bb = basis(other.nvars, other.degree);
        let degree = self.degree + other.degree;
        let mut acc = vec![0u64; dim_forms(self.nvars, degree as i64)];
        let mut e = vec![0u32; self.nvars];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let ea = ba.exponents(i);
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = ea[k] + bb.exponents(j)[k];
                }
                let idx = monomial_index(&e);
                acc[idx] = (acc[idx] + a as u64 * b as u64) % p;
            }
        }
        Form { field: f, nvars: self.nvars, degree, coeffs: acc.into_iter().map(|v| v as u32).collect() }
    }

    pub fn pow(&self, k: usize) -> Form {
        let mut acc = Form::constant(self.field, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[u32]) -> u32 {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let f = self.field;
        let b = basis(self.nvars, self.degree);
        // Powers of each coordinate, reused across monomials.
        let powers: Vec<Vec<u32>> = point
            .iter()
            .map(|&x| {
                let mut v = Vec::with_capacity(self.degree + 1);
                let mut acc = 1;
                for _ in 0..=self.degree {
                    v.push(acc);
                    acc = f.mul(acc, x);
                }
                v
            })
            .collect();
        let mut s = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = c;
            for (k, &e) in b.exponents(i).iter().enumerate() {
                term = f.mul(term, powers[k][e as usize]);
            }
            s = f.add(s, term);
        }
        s
    }

    /// Hasse derivative `D^beta`: coefficient of `x^(alpha-beta)` is
    /// `prod C(alpha_i, beta_i) * c_alpha`.
    pub fn hasse(&self, beta: &[u32]) -> Form {
        assert_eq!(beta.len(), self.nvars);
        let k: u32 = beta.iter().sum();
        let f = self.field;
        if k as usize > self.degree {
            return Form::zero(f, self.nvars, 0);
        }
        let mut out = Form::zero(f, self.nvars, self.degree - k as usize);
        let b = basis(self.nvars, self.degree);
        let mut e = vec![0u32; self.nvars];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let alpha = b.exponents(i);
            if alpha.iter().zip(beta).any(|(a, b)| a < b) {
                continue;
            }
            let mut m = c;
            for (j, slot) in e.iter_mut().enumerate() {
                *slot = alpha[j] - beta[j];
                m = f.mul(m, f.from_i64(binomial(alpha[j] as i64, beta[j] as i64)));
            }
            let idx = monomial_index(&e);
            out.coeffs[idx] = f.add(out.coeffs[idx], m);
        }
        out
    }

    /// Coefficient of `u^k` in `F(P + u W)`, as a degree-`k` form in `W`.
    pub fn taylor_coeff(&self, point: &[u32], k: usize) -> Form {
        let f = self.field;
        let b = basis(self.nvars, k);
        let coeffs = b.iter().map(|beta| self.hasse(beta).eval(point)).collect();
        Form { field: f, nvars: self.nvars, degree: k, coeffs }
    }

    /// Substitutes `x_i -> maps[i]`; all maps share one variable count and degree.
    pub fn compose(&self, maps: &[Form]) -> Form {
        assert_eq!(maps.len(), self.nvars, "one map per variable");
        let products = power_products(maps, self.degree);
        let mut out = products[0].scale(0);
        for (prod, &c) in products.iter().zip(&self.coeffs) {
            if c != 0 {
                out = out.add(&prod.scale(c));
            }
        }
        out
    }
}

/// All products `prod maps_i^alpha_i` over the degree-`l` basis in `maps.len()` variables.
pub fn power_products(maps: &[Form], l: usize) -> Vec<Form> {
    assert!(!maps.is_empty(), "no maps");
    let field = maps[0].field;
    let tn = maps[0].nvars;
    let n = maps.len();
    let mut prev = vec![Form::constant(field, tn, 1)];
    for deg in 1..=l {
        let b = basis(n, deg);
        let mut cur = Vec::with_capacity(b.len());
        let mut e = vec![0u32; n];
        for alpha in b.iter() {
            let i = alpha.iter().position(|&a| a > 0).expect("positive degree");
            e.copy_from_slice(alpha);
            e[i] -= 1;
            cur.push(maps[i].mul(&prev[monomial_index(&e)]));
        }
        prev = cur;
    }
    prev
}

/// Matrix of multiplication by `g` from degree-`a` forms to degree `a + deg g`.
pub fn mult_matrix(a: usize, g: &Form) -> FieldMatrix {
    let field = g.field;
    let n = g.nvars;
    let src = basis(n, a);
    let tgt = dim_forms(n, (a + g.degree) as i64);
    let mut m = FieldMatrix::zeros(field, tgt, src.len());
    let gb = basis(n, g.degree);
    let mut e = vec![0u32; n];
    for (j, alpha) in src.iter().enumerate() {
        for (i, &c) in g.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, slot) in e.iter_mut().enumerate() {
                *slot = alpha[k] + gb.exponents(i)[k];
            }
            m.set(monomial_index(&e), j, c);
        }
    }
    m
}

/// Matrix of `f -> f(maps)` on degree-`l` forms in `maps.len()` variables.
pub fn substitution_matrix(maps: &[Form], l: usize) -> FieldMatrix {
    let field = maps[0].field;
    let products = power_products(maps, l);
    let rows = dim_forms(maps[0].nvars, (maps[0].degree * l) as i64);
    let cols: Vec<Vec<u32>> = products.into_iter().map(|p| p.coeffs).collect();
    FieldMatrix::from_columns(field, rows, &cols)
}

/// Restriction of degree-`l` forms to a parametrized curve `nu : P1 -> P^n`.
pub fn pullback_matrix(nu: &[Form], l: usize) -> Result<FieldMatrix, FormsError> {
    for f in nu {
        if f.nvars != 2 {
            return Err(FormsError::NotBinary(f.nvars));
        }
        if f.degree != nu[0].degree {
            return Err(FormsError::DegreeMismatch { expected: nu[0].degree, found: f.degree });
        }
    }
    if gcd_all(nu).degree() > 0 {
        return Err(FormsError::BasePoints);
    }
    Ok(substitution_matrix(nu, l))
}

// ---- univariate toolkit (binary forms) ----

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_divrem(field: Fp, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = field.inv(*b.last().unwrap());
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = field.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, bi));
        }
        r = trim(r);
    }
    (q, r)
}

fn poly_monic(field: Fp, a: Vec<u32>) -> Vec<u32> {
    let a = trim(a);
    match a.last() {
        None => a,
        Some(&l) => {
            let inv = field.inv(l);
            a.into_iter().map(|c| field.mul(c, inv)).collect()
        }
    }
}

fn poly_gcd(field: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = poly_divrem(field, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(field, a)
}

fn check_binary(f: &Form) -> Result<(), FormsError> {
    if f.nvars == 2 {
        Ok(())
    } else {
        Err(FormsError::NotBinary(f.nvars))
    }
}

/// Degree in `t` of the dehomogenization; `None` for the zero form.
fn t_degree(f: &Form) -> Option<usize> {
    f.coeffs.iter().rposition(|&c| c != 0)
}

/// Order of vanishing at `(0:1)`, i.e. the power of `s` dividing `f`.
pub fn s_order(f: &Form) -> Option<usize> {
    t_degree(f).map(|k| f.degree - k)
}

fn from_t_poly(field: Fp, degree: usize, mut v: Vec<u32>) -> Form {
    assert!(v.len() <= degree + 1, "t-degree exceeds form degree");
    v.resize(degree + 1, 0);
    Form { field, nvars: 2, degree, coeffs: v }
}

/// Monic gcd of two binary forms (monic in `t` after removing powers of `s`).
pub fn gcd(f: &Form, g: &Form) -> Form {
    check_binary(f).expect("gcd of binary forms");
    check_binary(g).expect("gcd of binary forms");
    let field = f.field;
    match (s_order(f), s_order(g)) {
        (None, None) => Form::zero(field, 2, 0),
        (Some(_), None) => monic(f),
        (None, Some(_)) => monic(g),
        (Some(of), Some(og)) => {
            let u = poly_gcd(field, f.coeffs(), g.coeffs());
            let m = of.min(og);
            from_t_poly(field, u.len() - 1 + m, u)
        }
    }
}

/// Gcd of a list of binary forms.
pub fn gcd_all(forms: &[Form]) -> Form {
    let mut acc = forms[0].clone();
    for f in &forms[1..] {
        acc = gcd(&acc, f);
    }
    if acc.is_zero() {
        acc
    } else {
        monic(&acc)
    }
}

/// Scales a binary form so its highest nonzero `t`-coefficient is 1.
pub fn monic(f: &Form) -> Form {
    match t_degree(f) {
        None => f.clone(),
        Some(k) => f.scale(f.field.inv(f.coeffs[k])),
    }
}

/// Exact quotient `f / g` of binary forms.
pub fn exact_divide(f: &Form, g: &Form) -> Result<Form, FormsError> {
    check_binary(f)?;
    check_binary(g)?;
    let field = f.field;
    let og = s_order(g).expect("division by the zero form");
    if g.degree > f.degree {
        return if f.is_zero() { Ok(Form::zero(field, 2, 0)) } else { Err(FormsError::NotDivisible) };
    }
    let qdeg = f.degree - g.degree;
    let Some(of) = s_order(f) else {
        return Ok(Form::zero(field, 2, qdeg));
    };
    if og > of {
        return Err(FormsError::NotDivisible);
    }
    let (q, r) = poly_divrem(field, f.coeffs(), g.coeffs());
    if !r.is_empty() {
        return Err(FormsError::NotDivisible);
    }
    Ok(from_t_poly(field, qdeg, q))
}

/// Points of `P1(F_p)` where `f` vanishes, as `(s, t)` with `s = 1` or `(0, 1)`.
pub fn roots_in_fp(f: &Form) -> Vec<[u32; 2]> {
    check_binary(f).expect("roots of a binary form");
    let field = f.field;
    let mut out = Vec::new();
    let Some(k) = t_degree(f) else {
        return out;
    };
    if k > 0 {
        let c = f.coeffs();
        for t in 0..field.p() {
            let mut acc = 0;
            for &ci in c[..=k].iter().rev() {
                acc = field.add(field.mul(acc, t), ci);
            }
            if acc == 0 {
                out.push([1, t]);
            }
        }
    }
    if k < f.degree {
        out.push([0, 1]);
    }
    out
}

/// True iff `f` is nonzero without repeated factors over the algebraic closure.
pub fn is_squarefree(f: &Form) -> bool {
    check_binary(f).expect("squarefree test of a binary form");
    let Some(k) = t_degree(f) else {
        return false;
    };
    if f.degree - k > 1 {
        return false;
    }
    let field = f.field;
    let u = &f.coeffs()[..=k];
    let du: Vec<u32> = (1..=k).map(|i| field.mul(u[i], (i as u32) % field.p())).collect();
    poly_gcd(field, u, &du).len() <= 1
}

/// Binary linear form vanishing at `(a : b)`.
pub fn linear_factor(field: Fp, root: [u32; 2]) -> Form {
    // b*s - a*t vanishes at s = a, t = b.
    Form::linear(field, &[root[1], field.neg(root[0])])
}

/// Product of linear factors at the given points of P1.
pub fn from_roots(field: Fp, roots: &[[u32; 2]]) -> Form {
    roots.iter().fold(Form::constant(field, 2, 1), |acc, &r| acc.mul(&linear_factor(field, r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> Fp {
        Fp::new(32003).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(MonomialBasis::new(4, 3).len(), 20);
        assert_eq!(MonomialBasis::new(3, 9).len(), 55);
        let b = MonomialBasis::new(2, 3);
        let e: Vec<Vec<u32>> = b.iter().map(|x| x.to_vec()).collect();
        assert_eq!(e, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        for n in 1..=4 {
            for d in 0..=6 {
                let b = MonomialBasis::new(n, d);
                assert_eq!(b.len(), dim_forms(n, d as i64));
                for (i, m) in b.iter().enumerate() {
                    assert_eq!(b.index_of(m), i);
                }
            }
        }
    }

    #[test]
    fn multiplier_one_is_identity() {
        let one = Form::constant(f(), 4, 1);
        assert_eq!(mult_matrix(2, &one), FieldMatrix::identity(f(), 10));
    }

    #[test]
    fn x0_times_linear_forms_has_rank_four() {
        let x0 = Form::var(f(), 4, 0);
        let m = mult_matrix(1, &x0);
        assert_eq!((m.rows(), m.cols()), (10, 4));
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn cubic_piece_has_twenty_monomials() {
        assert_eq!(dim_forms(4, 3), 20);
        // A degree-6 rational curve has h0(O_C(3)) = 19.
        assert_eq!(20 - (6 * 3 + 1), 1);
    }

    fn twisted_cubic() -> Vec<Form> {
        (0..4).map(|i| Form::monomial(f(), &[3 - i, i], 1)).collect()
    }

    #[test]
    fn pullback_degree_zero_is_identity() {
        let m = pullback_matrix(&twisted_cubic(), 0).unwrap();
        assert_eq!(m, FieldMatrix::identity(f(), 1));
    }

    #[test]
    fn twisted_cubic_lies_on_three_quadrics() {
        let m = pullback_matrix(&twisted_cubic(), 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (7, 10));
        assert_eq!(m.rank(), 7);
        assert_eq!(m.kernel_basis().cols(), 3);
    }

    #[test]
    fn base_points_are_rejected() {
        let s = Form::var(f(), 2, 0);
        let nu: Vec<Form> = twisted_cubic().iter().map(|g| g.mul(&s)).collect();
        assert_eq!(pullback_matrix(&nu, 1), Err(FormsError::BasePoints));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let g = Form::from_coeffs(f(), 2, 2, vec![3, 5, 7]);
        let z = Form::zero(f(), 2, 4);
        assert_eq!(gcd(&g, &z), monic(&g));
        assert_eq!(monic(&g).coeffs()[2], 1);
    }

    #[test]
    fn s_t_s_minus_t() {
        let s = Form::var(f(), 2, 0);
        let t = Form::var(f(), 2, 1);
        let h = s.mul(&t).mul(&s.sub(&t));
        assert!(is_squarefree(&h));
        let mut r = roots_in_fp(&h);
        r.sort();
        assert_eq!(r, vec![[0, 1], [1, 0], [1, 1]]);
        assert!(!is_squarefree(&h.mul(&s)));
        assert!(!is_squarefree(&h.mul(&s.sub(&t))));
    }

    #[test]
    fn inexact_division_errors() {
        let s = Form::var(f(), 2, 0);
        let t = Form::var(f(), 2, 1);
        let st = s.mul(&t);
        assert_eq!(exact_divide(&st, &s), Ok(t.clone()));
        assert_eq!(exact_divide(&st, &s.add(&t)), Err(FormsError::NotDivisible));
        assert_eq!(exact_divide(&t.mul(&t), &s), Err(FormsError::NotDivisible));
    }

    #[test]
    fn taylor_coefficients_of_cube() {
        // F = x^3 in one effective direction: F(P + uW) = (p + u w)^3.
        let fl = f();
        let x = Form::var(fl, 2, 0);
        let cube = x.pow(3);
        let t1 = cube.taylor_coeff(&[2, 0], 1);
        // 3 p^2 w with p = 2
        assert_eq!(t1.eval(&[1, 0]), 12);
        let t3 = cube.taylor_coeff(&[2, 0], 3);
        assert_eq!(t3.eval(&[5, 7]), 125);
    }

    fn arb_binary(max_deg: usize) -> impl Strategy<Value = Form> {
        (0..=max_deg, any::<u64>()).prop_map(|(d, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Form::random(Fp::new(32003).unwrap(), 2, d, &mut rng)
        })
    }

    proptest! {
        #[test]
        fn product_is_divisible_by_each_factor(a in arb_binary(6), b in arb_binary(6)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = a.mul(&b);
            prop_assert_eq!(exact_divide(&ab, &a).unwrap(), b.clone());
            let g = gcd(&ab, &a);
            prop_assert_eq!(g, monic(&a));
        }

        #[test]
        fn pullback_is_multiplicative(seed in any::<u64>()) {
            // restrict(f g) = restrict(f) restrict(g) for random curves and forms.
            let fl = f();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nu: Vec<Form> = (0..4).map(|_| Form::random(fl, 2, 3, &mut rng)).collect();
            prop_assume!(gcd_all(&nu).degree() == 0);
            let rows: Vec<Vec<u32>> = nu.iter().map(|g| g.coeffs().to_vec()).collect();
            prop_assume!(FieldMatrix::from_rows(fl, 4, &rows).rank() == 4);
            let a = Form::random(fl, 4, 1, &mut rng);
            let b = Form::random(fl, 4, 2, &mut rng);
            let lhs = a.mul(&b).compose(&nu);
            let rhs = a.compose(&nu).mul(&b.compose(&nu));
            prop_assert_eq!(lhs.clone(), rhs);
            let m = pullback_matrix(&nu, 3).unwrap();
            prop_assert_eq!(m.mul_vec(a.mul(&b).coeffs()), lhs.coeffs().to_vec());
            // Base-point-free of degree e: surjective once l >= e - 1.
            prop_assert_eq!(pullback_matrix(&nu, 2).unwrap().rank(), 7);
        }

        #[test]
        fn roots_match_prescribed_factors(ts in proptest::collection::btree_set(0u32..32003, 1..5)) {
            let fl = f();
            let roots: Vec<[u32; 2]> = ts.iter().map(|&t| [1, t]).collect();
            let h = from_roots(fl, &roots);
            prop_assert!(is_squarefree(&h));
            prop_assert_eq!(roots_in_fp(&h), roots);
        }

        #[test]
        fn hasse_derivatives_detect_multiplicity(seed in any::<u64>()) {
            // (x - P)^2 * g vanishes to order 2 at P.
            let fl = f();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l1 = Form::random(fl, 3, 1, &mut rng);
            let l2 = Form::random(fl, 3, 1, &mut rng);
            let g = Form::random(fl, 3, 2, &mut rng);
            // Common zero of l1, l2.
            let c = l1.coeffs();
            let d = l2.coeffs();
            let pt = [
                fl.sub(fl.mul(c[1], d[2]), fl.mul(c[2], d[1])),
                fl.sub(fl.mul(c[2], d[0]), fl.mul(c[0], d[2])),
                fl.sub(fl.mul(c[0], d[1]), fl.mul(c[1], d[0])),
            ];
            prop_assume!(pt != [0, 0, 0]);
            let h = l1.mul(&l2).mul(&g);
            prop_assert_eq!(h.taylor_coeff(&pt, 0).coeffs()[0], 0);
            prop_assert!(h.taylor_coeff(&pt, 1).is_zero());
        }
    }
}
