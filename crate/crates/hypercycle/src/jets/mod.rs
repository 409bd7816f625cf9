//! Exact truncated polynomial algebra in three variables.
//!
//! A [`Jet3`] is a polynomial in three variables over [`ExactComplex`]
//! coefficients, truncated at a fixed total degree bound `D`. Products drop
//! every monomial above the bound, so a jet is the degree-`D` Taylor data of
//! a map at the origin. The default bound used by the normal-form
//! computation is 3; 20 monomials per component at that bound, so the dense
//! table representation is plenty.
//!
//! Everything in this module is exact: no floating point enters, and tests
//! against closed-form coefficient tables compare with `==`.

mod complex;

pub use complex::{rational, ExactComplex};

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors for jet-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("degree bounds differ: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("substitution target has a nonzero constant term in component {component}")]
    NonzeroConstantTerm { component: usize },
    #[error("claimed inverse fails: product with the matrix is not the identity")]
    NotInverse,
    #[error("jet has unexpected shape: {reason}")]
    BadJetShape { reason: String },
    #[error("monomial ({0}, {1}, {2}) exceeds the degree bound {bound}", .triple[0], .triple[1], .triple[2])]
    OutOfDegree { triple: [u8; 3], bound: u32 },
}

/// Truncated polynomial in three variables with exact complex coefficients.
///
/// Invariants: every stored exponent triple has total degree `<= degree`,
/// and no zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet3 {
    degree: u32,
    terms: BTreeMap<[u8; 3], ExactComplex>,
}

fn total_degree(m: &[u8; 3]) -> u32 {
    m[0] as u32 + m[1] as u32 + m[2] as u32
}

impl Jet3 {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn constant(degree: u32, c: ExactComplex) -> Self {
        let mut jet = Self::zero(degree);
        jet.add_term([0, 0, 0], c);
        jet
    }

    /// The coordinate variable `var` (0, 1 or 2) as a jet.
    pub fn var(degree: u32, var: usize) -> Self {
        assert!(var < 3, "Jet3 has three variables");
        assert!(degree >= 1, "degree bound must admit a linear term");
        let mut m = [0u8; 3];
        m[var] = 1;
        let mut jet = Self::zero(degree);
        jet.add_term(m, ExactComplex::one());
        jet
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient of `m`, truncating above the bound and
    /// keeping the table canonical (no stored zeros).
    pub fn add_term(&mut self, m: [u8; 3], c: ExactComplex) {
        if c.is_zero() || total_degree(&m) > self.degree {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(ExactComplex::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Exact coefficient of the monomial `m`; errors above the bound.
    pub fn coeff(&self, m: [u8; 3]) -> Result<ExactComplex, JetError> {
        if total_degree(&m) > self.degree {
            return Err(JetError::OutOfDegree { triple: m, bound: self.degree });
        }
        Ok(self.get(m))
    }

    /// Coefficient of `m`, zero when absent. Panics above the bound.
    pub fn get(&self, m: [u8; 3]) -> ExactComplex {
        debug_assert!(total_degree(&m) <= self.degree);
        self.terms.get(&m).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 3], &ExactComplex)> {
        self.terms.iter()
    }

    /// Same coefficients under a new degree bound (dropping what no longer fits).
    pub fn with_degree(&self, degree: u32) -> Self {
        let mut out = Self::zero(degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// The homogeneous part of total degree `d`, as a jet with the same bound.
    pub fn degree_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            if total_degree(m) == d {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, coeff) in &self.terms {
            out.add_term(*m, coeff * c);
        }
        out
    }

    /// Truncated product; the factors must share a degree bound.
    pub fn try_mul(&self, rhs: &Jet3) -> Result<Jet3, JetError> {
        if self.degree != rhs.degree {
            return Err(JetError::DegreeMismatch { left: self.degree, right: rhs.degree });
        }
        let mut out = Jet3::zero(self.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                if total_degree(&m) > self.degree {
                    continue;
                }
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Jet3, JetError> {
        let mut out = Jet3::constant(self.degree, ExactComplex::one());
        for _ in 0..n {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// Composition `self ∘ map`, truncated. Every component of `map` must
    /// have zero constant term, otherwise truncation would be meaningless.
    pub fn substitute(&self, map: &JetMap3) -> Result<Jet3, JetError> {
        for (i, comp) in map.components().iter().enumerate() {
            if !comp.get([0, 0, 0]).is_zero() {
                return Err(JetError::NonzeroConstantTerm { component: i });
            }
        }
        let degree = map.degree();
        // Powers of the substituted variables, computed once.
        let mut powers: [Vec<Jet3>; 3] =
            [vec![Jet3::constant(degree, ExactComplex::one())], vec![], vec![]];
        powers[1].push(Jet3::constant(degree, ExactComplex::one()));
        powers[2].push(Jet3::constant(degree, ExactComplex::one()));
        for v in 0..3 {
            for d in 1..=(self.degree as usize) {
                let next = powers[v][d - 1].try_mul(&map.components()[v])?;
                powers[v].push(next);
            }
        }
        let mut out = Jet3::zero(degree);
        for (m, c) in &self.terms {
            let mono = powers[0][m[0] as usize]
                .try_mul(&powers[1][m[1] as usize])?
                .try_mul(&powers[2][m[2] as usize])?;
            out = &out + &mono.scale(c);
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `var`; bound drops by one.
    pub fn partial(&self, var: usize) -> Jet3 {
        assert!(var < 3);
        let mut out = Jet3::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut dm = *m;
            dm[var] -= 1;
            out.add_term(dm, c.scale_int(m[var] as i64));
        }
        out
    }

    /// Coefficients conjugated entrywise.
    pub fn conj_coeffs(&self) -> Jet3 {
        let mut out = Jet3::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c.conj());
        }
        out
    }

    /// Human-readable polynomial with the given variable labels.
    pub fn render(&self, labels: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut monomials: Vec<&[u8; 3]> = self.terms.keys().collect();
        monomials.sort_by_key(|m| (total_degree(m), [3 - m[0], 3 - m[1], 3 - m[2]]));
        let mut out = String::new();
        for (idx, m) in monomials.iter().enumerate() {
            let c = &self.terms[*m];
            if idx > 0 {
                out.push_str(" + ");
            }
            let mono = render_monomial(m, labels);
            let cs = c.to_string();
            if mono.is_empty() {
                out.push_str(&cs);
            } else if c == &ExactComplex::one() {
                out.push_str(&mono);
            } else if cs.contains(' ') {
                out.push_str(&format!("({})*{}", cs, mono));
            } else {
                out.push_str(&format!("{}*{}", cs, mono));
            }
        }
        out
    }
}

fn render_monomial(m: &[u8; 3], labels: [&str; 3]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(labels[v].to_string()),
            _ => parts.push(format!("{}^{}", labels[v], e)),
        }
    }
    parts.join("*")
}

impl ExactComplex {
    fn scale_int(&self, n: i64) -> ExactComplex {
        self * &ExactComplex::from_int(n)
    }
}

impl std::ops::Add for &Jet3 {
    type Output = Jet3;
    fn add(self, rhs: &Jet3) -> Jet3 {
        assert_eq!(self.degree, rhs.degree, "jet degree bounds must match");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: &Jet3) -> Jet3 {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        let mut out = Jet3::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

/// A 3x3 matrix of exact complex scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap3 {
    pub entries: [[ExactComplex; 3]; 3],
}

impl LinearMap3 {
    pub fn new(entries: [[ExactComplex; 3]; 3]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        let z = ExactComplex::zero;
        let o = ExactComplex::one;
        Self::new([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    pub fn from_rows(rows: [[i64; 3]; 3]) -> Self {
        Self::new(rows.map(|r| r.map(ExactComplex::from_int)))
    }

    pub fn matmul(&self, rhs: &LinearMap3) -> LinearMap3 {
        let mut out = [[ExactComplex::zero(), ExactComplex::zero(), ExactComplex::zero()],
            [ExactComplex::zero(), ExactComplex::zero(), ExactComplex::zero()],
            [ExactComplex::zero(), ExactComplex::zero(), ExactComplex::zero()]];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ExactComplex::zero();
                for l in 0..3 {
                    acc = &acc + &(&self.entries[i][l] * &rhs.entries[l][j]);
                }
                out[i][j] = acc;
            }
        }
        LinearMap3::new(out)
    }

    pub fn mul_vec(&self, v: &[ExactComplex; 3]) -> [ExactComplex; 3] {
        std::array::from_fn(|i| {
            let mut acc = ExactComplex::zero();
            for (l, vl) in v.iter().enumerate() {
                acc = &acc + &(&self.entries[i][l] * vl);
            }
            acc
        })
    }

    pub fn is_identity(&self) -> bool {
        self == &LinearMap3::identity()
    }

    /// The matrix as a linear jet map of the given degree bound.
    pub fn as_jet_map(&self, degree: u32) -> JetMap3 {
        let comps = std::array::from_fn(|i| {
            let mut jet = Jet3::zero(degree);
            for j in 0..3 {
                let mut m = [0u8; 3];
                m[j] = 1;
                jet.add_term(m, self.entries[i][j].clone());
            }
            jet
        });
        JetMap3::new(comps)
    }
}

/// Three jet components sharing one degree bound: a truncated map R^3 -> R^3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMap3 {
    comps: [Jet3; 3],
    labels: [&'static str; 3],
}

impl JetMap3 {
    pub fn new(comps: [Jet3; 3]) -> Self {
        assert!(
            comps[0].degree() == comps[1].degree() && comps[1].degree() == comps[2].degree(),
            "jet map components must share a degree bound"
        );
        Self { comps, labels: ["x", "y", "z"] }
    }

    pub fn with_labels(mut self, labels: [&'static str; 3]) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> [&'static str; 3] {
        self.labels
    }

    pub fn degree(&self) -> u32 {
        self.comps[0].degree()
    }

    pub fn components(&self) -> &[Jet3; 3] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Jet3 {
        &self.comps[i]
    }

    pub fn identity(degree: u32) -> Self {
        Self::new(std::array::from_fn(|i| Jet3::var(degree, i)))
    }

    /// Composition `self ∘ inner` (inner components need zero constant term).
    pub fn compose(&self, inner: &JetMap3) -> Result<JetMap3, JetError> {
        let comps = [
            self.comps[0].substitute(inner)?,
            self.comps[1].substitute(inner)?,
            self.comps[2].substitute(inner)?,
        ];
        Ok(JetMap3::new(comps).with_labels(inner.labels))
    }

    /// The linear part as a matrix.
    pub fn linear_part(&self) -> LinearMap3 {
        let mut out = LinearMap3::identity();
        for i in 0..3 {
            for j in 0..3 {
                let mut m = [0u8; 3];
                m[j] = 1;
                out.entries[i][j] = self.comps[i].get(m);
            }
        }
        out
    }

    /// Conjugation `Cinv ∘ self ∘ C` by an exactly inverted linear change.
    pub fn conjugate(&self, c: &LinearMap3, cinv: &LinearMap3) -> Result<JetMap3, JetError> {
        if !cinv.matmul(c).is_identity() {
            return Err(JetError::NotInverse);
        }
        let inner = self.compose(&c.as_jet_map(self.degree()))?;
        let comps = std::array::from_fn(|i| {
            let mut acc = Jet3::zero(self.degree());
            for j in 0..3 {
                acc = &acc + &inner.comps[j].scale(&cinv.entries[i][j]);
            }
            acc
        });
        Ok(JetMap3::new(comps))
    }

    /// Jacobian matrix of jets, entries truncated at `degree - 1` content.
    pub fn jacobian(&self) -> JetMatrix3 {
        let d = self.degree();
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| self.comps[i].partial(j).with_degree(d))
        });
        JetMatrix3 { entries }
    }

    pub fn degree_part(&self, d: u32) -> JetMap3 {
        JetMap3::new(std::array::from_fn(|i| self.comps[i].degree_part(d)))
            .with_labels(self.labels)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, comp) in self.comps.iter().enumerate() {
            out.push_str(&format!("  [{}] {}\n", i + 1, comp.render(self.labels)));
        }
        out
    }
}

impl std::ops::Add for &JetMap3 {
    type Output = JetMap3;
    fn add(self, rhs: &JetMap3) -> JetMap3 {
        JetMap3::new(std::array::from_fn(|i| &self.comps[i] + &rhs.comps[i]))
            .with_labels(self.labels)
    }
}

impl std::ops::Sub for &JetMap3 {
    type Output = JetMap3;
    fn sub(self, rhs: &JetMap3) -> JetMap3 {
        JetMap3::new(std::array::from_fn(|i| &self.comps[i] - &rhs.comps[i]))
            .with_labels(self.labels)
    }
}

/// A 3x3 matrix whose entries are jets (used for truncated Jacobians).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMatrix3 {
    pub entries: [[Jet3; 3]; 3],
}

impl JetMatrix3 {
    pub fn identity(degree: u32) -> Self {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    Jet3::constant(degree, ExactComplex::one())
                } else {
                    Jet3::zero(degree)
                }
            })
        });
        Self { entries }
    }

    pub fn degree(&self) -> u32 {
        self.entries[0][0].degree()
    }

    pub fn matmul(&self, rhs: &JetMatrix3) -> Result<JetMatrix3, JetError> {
        let d = self.degree();
        let mut entries: [[Jet3; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Jet3::zero(d)));
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Jet3::zero(d);
                for l in 0..3 {
                    acc = &acc + &self.entries[i][l].try_mul(&rhs.entries[l][j])?;
                }
                entries[i][j] = acc;
            }
        }
        Ok(JetMatrix3 { entries })
    }

    /// Matrix-vector product against the components of a jet map.
    pub fn mul_map(&self, v: &JetMap3) -> Result<JetMap3, JetError> {
        let d = self.degree();
        let mut comps: [Jet3; 3] = std::array::from_fn(|_| Jet3::zero(d));
        for i in 0..3 {
            let mut acc = Jet3::zero(d);
            for l in 0..3 {
                acc = &acc + &self.entries[i][l].try_mul(&v.components()[l].with_degree(d))?;
            }
            comps[i] = acc;
        }
        Ok(JetMap3::new(comps).with_labels(v.labels()))
    }

    /// Drops every entry term of total degree >= `max_content + 1`.
    pub fn truncate_content(&self, max_content: u32) -> JetMatrix3 {
        let d = self.degree();
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                self.entries[i][j].with_degree(max_content.min(d)).with_degree(d)
            })
        });
        JetMatrix3 { entries }
    }
}

/// Truncated inverse of `Dh` for a near-identity change `h = id + h_tilde`:
/// `Id - D h_tilde + (D h_tilde)^2`, entries truncated at content degree
/// `D - 1`. That is enough for degree-`D` results of `Dh^{-1} ∘ (...)`
/// because each discarded entry term only multiplies terms of degree >= 1.
pub fn truncated_inverse_jacobian(h_tilde: &JetMap3) -> Result<JetMatrix3, JetError> {
    for comp in h_tilde.components() {
        if !comp.get([0, 0, 0]).is_zero() {
            return Err(JetError::BadJetShape {
                reason: "near-identity remainder must have zero constant term".into(),
            });
        }
        let lin = comp.degree_part(1);
        if !lin.is_zero() {
            return Err(JetError::BadJetShape {
                reason: "near-identity remainder must have zero linear part".into(),
            });
        }
    }
    let d = h_tilde.degree();
    let j = h_tilde.jacobian();
    let j2 = j.matmul(&j)?;
    let id = JetMatrix3::identity(d);
    let mut entries: [[Jet3; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Jet3::zero(d)));
    for r in 0..3 {
        for c in 0..3 {
            entries[r][c] = &(&id.entries[r][c] - &j.entries[r][c]) + &j2.entries[r][c];
        }
    }
    Ok(JetMatrix3 { entries }.truncate_content(d.saturating_sub(1)))
}

impl fmt::Display for Jet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(["x", "y", "z"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_plus_x(d: u32) -> Jet3 {
        let mut j = Jet3::constant(d, ExactComplex::one());
        j.add_term([1, 0, 0], ExactComplex::one());
        j
    }

    #[test]
    fn square_of_binomial() {
        let p = one_plus_x(2);
        let sq = p.try_mul(&p).unwrap();
        assert_eq!(sq.get([0, 0, 0]), ExactComplex::one());
        assert_eq!(sq.get([1, 0, 0]), ExactComplex::from_int(2));
        assert_eq!(sq.get([2, 0, 0]), ExactComplex::one());
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn product_fully_truncated() {
        // (x + y) * (x*y) at bound 2 has no representable term.
        let d = 2;
        let xy = Jet3::var(d, 0).try_mul(&Jet3::var(d, 1)).unwrap();
        let s = &Jet3::var(d, 0) + &Jet3::var(d, 1);
        assert!(s.try_mul(&xy).unwrap().is_zero());
    }

    #[test]
    fn neumann_series_inverts_one_plus_4u() {
        // (1 + 4u)^{-1} = 1 - 4u + 16u^2 at bound 2, checked by multiplying back.
        let d = 2;
        let mut series = Jet3::constant(d, ExactComplex::one());
        series.add_term([0, 0, 1], ExactComplex::from_int(-4));
        series.add_term([0, 0, 2], ExactComplex::from_int(16));
        let mut denom = Jet3::constant(d, ExactComplex::one());
        denom.add_term([0, 0, 1], ExactComplex::from_int(4));
        let product = series.try_mul(&denom).unwrap();
        assert_eq!(product, Jet3::constant(d, ExactComplex::one()));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Jet3::var(2, 0);
        let b = Jet3::var(3, 0);
        assert!(matches!(a.try_mul(&b), Err(JetError::DegreeMismatch { .. })));
    }

    #[test]
    fn substitute_expands_squares() {
        // x^2 ∘ (x + y, y, z) = x^2 + 2xy + y^2
        let d = 2;
        let p = Jet3::var(d, 0).pow(2).unwrap();
        let m = JetMap3::new([&Jet3::var(d, 0) + &Jet3::var(d, 1), Jet3::var(d, 1), Jet3::var(d, 2)]);
        let q = p.substitute(&m).unwrap();
        assert_eq!(q.get([2, 0, 0]), ExactComplex::one());
        assert_eq!(q.get([1, 1, 0]), ExactComplex::from_int(2));
        assert_eq!(q.get([0, 2, 0]), ExactComplex::one());
    }

    #[test]
    fn substitute_rejects_constant_terms() {
        let d = 2;
        let p = Jet3::var(d, 0);
        let mut shifted = Jet3::var(d, 0);
        shifted.add_term([0, 0, 0], ExactComplex::one());
        let m = JetMap3::new([shifted, Jet3::var(d, 1), Jet3::var(d, 2)]);
        assert_eq!(p.substitute(&m), Err(JetError::NonzeroConstantTerm { component: 0 }));
    }

    #[test]
    fn conjugate_identity_is_identity() {
        let id = JetMap3::identity(3);
        let c = LinearMap3::from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let mut cinv = LinearMap3::identity();
        cinv.entries[0][0] = ExactComplex::ratio(1, 2);
        let out = id.conjugate(&c, &cinv).unwrap();
        assert_eq!(out, JetMap3::identity(3));
    }

    #[test]
    fn conjugate_checks_the_inverse() {
        let id = JetMap3::identity(3);
        let c = LinearMap3::from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(id.conjugate(&c, &LinearMap3::identity()), Err(JetError::NotInverse));
    }

    #[test]
    fn truncated_inverse_of_zero_is_identity() {
        let h = JetMap3::new([Jet3::zero(3), Jet3::zero(3), Jet3::zero(3)]);
        let inv = truncated_inverse_jacobian(&h).unwrap();
        assert_eq!(inv, JetMatrix3::identity(3).truncate_content(2));
    }

    #[test]
    fn truncated_inverse_scalar_series() {
        // h_tilde = (x^2, 0, 0): row 1 of the inverse is 1 - 2x + 4x^2.
        let d = 3;
        let h = JetMap3::new([Jet3::var(d, 0).pow(2).unwrap(), Jet3::zero(d), Jet3::zero(d)]);
        let inv = truncated_inverse_jacobian(&h).unwrap();
        let mut expected = Jet3::constant(d, ExactComplex::one());
        expected.add_term([1, 0, 0], ExactComplex::from_int(-2));
        expected.add_term([2, 0, 0], ExactComplex::from_int(4));
        assert_eq!(inv.entries[0][0], expected);
        assert!(inv.entries[0][1].is_zero() && inv.entries[0][2].is_zero());
        assert_eq!(inv.entries[1][1], Jet3::constant(d, ExactComplex::one()));
        assert_eq!(inv.entries[2][2], Jet3::constant(d, ExactComplex::one()));
    }

    #[test]
    fn truncated_inverse_multiplies_back_to_identity() {
        // Generic quadratic remainder: the product with Dh must be the
        // identity up to terms the truncation is allowed to drop.
        let d = 3;
        let mut h1 = Jet3::zero(d);
        h1.add_term([2, 0, 0], ExactComplex::gauss(0, -4));
        h1.add_term([1, 1, 0], ExactComplex::gauss(1, 2));
        let mut h2 = Jet3::zero(d);
        h2.add_term([0, 1, 1], ExactComplex::ratio(4, 5));
        let mut h3 = Jet3::zero(d);
        h3.add_term([0, 0, 2], ExactComplex::from_int(4));
        let h = JetMap3::new([h1, h2, h3]);
        let inv = truncated_inverse_jacobian(&h).unwrap();
        let full = JetMap3::identity(d);
        let dh = (&full + &h).jacobian();
        let product = inv.matmul(&dh).unwrap().truncate_content(d - 2);
        assert_eq!(product, JetMatrix3::identity(d).truncate_content(d - 2));
    }

    #[test]
    fn coeff_reports_out_of_degree() {
        let p = Jet3::var(2, 0);
        assert_eq!(p.coeff([1, 0, 0]), Ok(ExactComplex::one()));
        assert_eq!(p.coeff([0, 1, 0]), Ok(ExactComplex::zero()));
        assert!(matches!(p.coeff([2, 1, 0]), Err(JetError::OutOfDegree { .. })));
    }

    #[test]
    fn render_is_sorted_and_compact() {
        let mut p = Jet3::constant(3, ExactComplex::one());
        p.add_term([1, 0, 0], ExactComplex::from_int(2));
        p.add_term([2, 1, 0], ExactComplex::ratio_pair(-16, 5, -48, 5));
        let s = p.render(["u", "v", "w"]);
        assert_eq!(s, "1 + 2*u + (-16/5 - 48/5*i)*u^2*v");
    }
}
