//! The level-one Fock module `F = S(ĥ^-) ⊗ K[Q]`.
//!
//! A basis vector is a monomial in the negative Heisenberg modes times a
//! lattice marker `e^β`. Internally the monomials are written in the
//! rescaled generators `ā_i(-n) = a_i(-n)/[n]`; with this normalization
//! every coefficient produced by the vertex operators is a Laurent
//! polynomial, so no rational-function normalization is needed while
//! evaluating. [`FockSpace::render`] converts back to the `a_i(-n)` basis.
//!
//! Operators here act on the whole (infinite) module; a [`Truncation`] only
//! selects which basis states are enumerated as test inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::roots::{CocycleValue, RootSystem};
use crate::scalars::{qnum_rs, Field, Rat, Scalar};

/// Errors raised by Fock-space operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    /// A result left the truncation window.
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    /// A Heisenberg mode beyond the precomputed tables was requested.
    #[error("mode {0} exceeds the supported maximum {1}")]
    ModeOutOfRange(u32, u32),
}

/// One oscillator `ā_node(-mode)`.
pub type Osc = (u8, u8);

/// A basis vector `Π ā_i(-n) ⊗ e^β`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FockState {
    beta: SmallVec<[i8; 8]>,
    osc: SmallVec<[Osc; 6]>,
}

impl FockState {
    /// The vacuum `1 ⊗ e^0` for a lattice of the given rank.
    pub fn vacuum(rank: usize) -> Self {
        FockState { beta: SmallVec::from_elem(0, rank), osc: SmallVec::new() }
    }

    /// A state from an unsorted oscillator list and a lattice point.
    pub fn new(osc: &[(usize, u32)], beta: &[i32]) -> Self {
        let mut o: SmallVec<[Osc; 6]> = osc.iter().map(|&(i, n)| (i as u8, n as u8)).collect();
        o.sort_unstable();
        FockState { beta: beta.iter().map(|&b| b as i8).collect(), osc: o }
    }

    /// Lattice coordinates of `β` over the simple roots.
    pub fn beta(&self) -> Vec<i32> {
        self.beta.iter().map(|&b| b as i32).collect()
    }

    /// Lattice coordinate of `α_i` (1-based node).
    pub fn beta_coord(&self, i: usize) -> i32 {
        self.beta[i - 1] as i32
    }

    /// Oscillators as sorted `(node, mode)` pairs.
    pub fn oscillators(&self) -> &[Osc] {
        &self.osc
    }

    /// Sum of the oscillator modes.
    pub fn osc_degree(&self) -> u32 {
        self.osc.iter().map(|&(_, n)| n as u32).sum()
    }

    /// `Σ n + (β,β)/2`.
    pub fn degree(&self, rs: &RootSystem) -> i32 {
        let b = self.beta();
        self.osc_degree() as i32 + rs.bilinear_form(&b, &b) / 2
    }

    /// Multiplicity of `ā_i(-n)`.
    pub fn multiplicity(&self, i: usize, n: u32) -> usize {
        self.osc.iter().filter(|&&o| o == (i as u8, n as u8)).count()
    }

    /// The same monomial in a shifted sector `β + α`.
    pub fn shifted(&self, alpha: &[i32]) -> Self {
        let mut s = self.clone();
        for (b, a) in s.beta.iter_mut().zip(alpha) {
            *b = (*b as i32 + a) as i8;
        }
        s
    }

    /// The same monomial with `α_i` added `sign` times.
    pub fn shifted_simple(&self, i: usize, sign: i32) -> Self {
        let mut s = self.clone();
        s.beta[i - 1] = (s.beta[i - 1] as i32 + sign) as i8;
        s
    }

    /// Multiplies by one more oscillator.
    pub fn with_osc(&self, o: Osc) -> Self {
        let mut s = self.clone();
        let pos = s.osc.partition_point(|x| *x <= o);
        s.osc.insert(pos, o);
        s
    }

    /// Removes one copy of an oscillator, if present.
    pub fn without_osc(&self, o: Osc) -> Option<Self> {
        let pos = self.osc.iter().position(|x| *x == o)?;
        let mut s = self.clone();
        s.osc.remove(pos);
        Some(s)
    }

    /// Replaces the oscillator part.
    pub(crate) fn with_oscillators(&self, osc: SmallVec<[Osc; 6]>) -> Self {
        FockState { beta: self.beta.clone(), osc }
    }

    /// Text form in the `a_i(-n)` basis, without coefficient.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut k = 0;
        while k < self.osc.len() {
            let o = self.osc[k];
            let mut m = 1;
            while k + m < self.osc.len() && self.osc[k + m] == o {
                m += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            let _ = write!(out, "a_{}(-{})", o.0, o.1);
            if m > 1 {
                let _ = write!(out, "^{m}");
            }
            k += m;
        }
        if out.is_empty() {
            out.push('1');
        }
        let beta: Vec<String> = self.beta.iter().map(|b| b.to_string()).collect();
        let _ = write!(out, " ⊗ e^{{[{}]}}", beta.join(","));
        out
    }
}

/// A finite linear combination of basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct LinComb<E> {
    terms: BTreeMap<FockState, E>,
}

impl<E: Clone> Default for LinComb<E> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<E: Clone> LinComb<E> {
    /// The zero vector.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · state`; zero coefficients give the zero vector.
    pub fn single<F: Field<E = E>>(f: &F, state: FockState, c: E) -> Self {
        let mut out = Self::zero();
        if !f.is_zero(&c) {
            out.terms.insert(state, c);
        }
        out
    }

    /// Whether no term is present.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether no term is present.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &E)> {
        self.terms.iter()
    }

    /// Coefficient of a state.
    pub fn coeff(&self, s: &FockState) -> Option<&E> {
        self.terms.get(s)
    }

    /// Adds `c · state`, dropping cancelled terms.
    pub fn add_term<F: Field<E = E>>(&mut self, f: &F, state: FockState, c: E) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(state) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                f.add_assign(o.get_mut(), &c);
                if f.is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c · other`.
    pub fn add_scaled<F: Field<E = E>>(&mut self, f: &F, other: &Self, c: &E) {
        for (s, x) in &other.terms {
            self.add_term(f, s.clone(), f.mul(x, c));
        }
    }

    /// Adds `other`.
    pub fn add_assign<F: Field<E = E>>(&mut self, f: &F, other: &Self) {
        for (s, x) in &other.terms {
            self.add_term(f, s.clone(), x.clone());
        }
    }

    /// `c · self`.
    pub fn scale<F: Field<E = E>>(&self, f: &F, c: &E) -> Self {
        let mut out = Self::zero();
        out.add_scaled(f, self, c);
        out
    }

    /// `self − other`.
    pub fn sub<F: Field<E = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(f, other, &f.neg(&f.one()));
        out
    }
}

/// Which basis states are enumerated as test inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Truncation {
    /// Bound on the total degree `Σ n + (β,β)/2`.
    pub max_osc_degree: u32,
    /// Bound on each lattice coordinate `|b_i|`.
    pub beta_box: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { max_osc_degree: 3, beta_box: 2 }
    }
}

fn partitions_into(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, rest: u32, max_part: u32) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p);
        partitions_into(out, cur, rest - p, p);
        cur.pop();
    }
}

/// All partitions of `n`, parts in decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    partitions_into(&mut out, &mut Vec::new(), n, n);
    out
}

/// Multisets of `(node, mode)` oscillators of total mode `d` over nodes `1..=rank`.
fn colored_monomials(rank: usize, d: u32) -> Vec<SmallVec<[Osc; 6]>> {
    let mut out = Vec::new();
    for p in partitions(d) {
        // Assign colors to the parts, non-decreasing within equal parts.
        let mut acc: Vec<SmallVec<[Osc; 6]>> = vec![SmallVec::new()];
        let mut k = 0;
        while k < p.len() {
            let n = p[k];
            let m = p[k..].iter().take_while(|&&x| x == n).count();
            let mut next = Vec::new();
            for base in &acc {
                for combo in multisets(rank, m) {
                    let mut b = base.clone();
                    b.extend(combo.into_iter().map(|i| (i as u8, n as u8)));
                    next.push(b);
                }
            }
            acc = next;
            k += m;
        }
        for mut v in acc {
            v.sort_unstable();
            out.push(v);
        }
    }
    out
}

/// Non-decreasing sequences of length `m` over `1..=rank`.
fn multisets(rank: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(rank: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..=rank {
            cur.push(i);
            rec(rank, m, i, cur, out);
            cur.pop();
        }
    }
    rec(rank, m, 1, &mut Vec::new(), &mut out);
    out
}

impl Truncation {
    /// Whether a state lies in the window.
    pub fn contains(&self, rs: &RootSystem, s: &FockState) -> bool {
        s.beta.iter().all(|b| b.unsigned_abs() as u32 <= self.beta_box) && s.degree(rs) <= self.max_osc_degree as i32
    }

    /// Lattice points in the box whose norm fits under the degree bound.
    pub fn sectors(&self, rs: &RootSystem) -> Vec<Vec<i32>> {
        let n = rs.rank();
        let b = self.beta_box as i32;
        let mut out = Vec::new();
        let mut cur = vec![-b; n];
        loop {
            if rs.bilinear_form(&cur, &cur) / 2 <= self.max_osc_degree as i32 {
                out.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                if cur[k] < b {
                    cur[k] += 1;
                    break;
                }
                cur[k] = -b;
                k += 1;
            }
        }
    }

    /// All window states in basis order: degree, then `β`, then oscillators.
    pub fn enumerate(&self, rs: &RootSystem) -> Vec<FockState> {
        let n = rs.rank();
        let max = self.max_osc_degree as i32;
        let mut by_osc: Vec<Vec<SmallVec<[Osc; 6]>>> = Vec::new();
        for d in 0..=max.max(0) as u32 {
            by_osc.push(colored_monomials(n, d));
        }
        let mut out = Vec::new();
        for beta in self.sectors(rs) {
            let norm = rs.bilinear_form(&beta, &beta) / 2;
            for (d, monos) in by_osc.iter().enumerate().take((max - norm + 1).max(0) as usize) {
                let _ = d;
                for m in monos {
                    out.push(FockState { beta: beta.iter().map(|&b| b as i8).collect(), osc: m.clone() });
                }
            }
        }
        out.sort_by(|a, b| (a.degree(rs), &a.beta, &a.osc).cmp(&(b.degree(rs), &b.beta, &b.osc)));
        out
    }
}

/// `[a_i(m), a_j(l)]` at level one, as a central scalar.
pub fn heisenberg_bracket(rs: &RootSystem, i: usize, m: i32, j: usize, l: i32) -> Scalar {
    if m + l != 0 || m == 0 {
        return Scalar::zero();
    }
    let am = m.abs();
    let a = rs.cartan(i, j);
    // (rs)^{|m|/2} (rs)^{-m a/2} [m a] / |m| · [|m|], written with ⟨i,i⟩ = r/s.
    let diag = |x: i32| Scalar::mono(Rat::ONE, 2 * x, -2 * x);
    let num = diag(m * a).sub(&diag(-m * a));
    let rms = Scalar::r().sub(&Scalar::s());
    Scalar::rs_half(am).mul(&num.div(&rms).expect("r ≠ s")).mul(&qnum_rs(am)).scale(&Rat::new(1, am as i64))
}

/// Which scalar diagonal operator to apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagonal {
    /// `ω_i`, acting by `⟨β,i⟩`.
    Omega(usize),
    /// `ω'_i`, acting by `⟨i,β⟩^{-1}`.
    OmegaPrime(usize),
    /// `ε_α`, acting by the lattice cocycle `ε_0(α,β)`.
    CocycleEps(Vec<i32>),
    /// `D(r) = r^{-d}`.
    DegreeR,
    /// `D(s) = s^{-d}`.
    DegreeS,
}

/// Largest Heisenberg mode covered by the precomputed tables.
pub const MAX_MODE: u32 = 24;

/// The Fock module over a coefficient field, with Heisenberg tables.
#[derive(Debug, Clone)]
pub struct FockSpace<F: Field> {
    rs: Arc<RootSystem>,
    field: F,
    /// `qn[n] = [n]`.
    qn: Vec<F::E>,
    /// `ann[i][j][n]`: `a_i(n) ā_j(-n) = ann · 1`, nodes 1-based.
    ann: Vec<Vec<Vec<F::E>>>,
}

impl<F: Field> FockSpace<F> {
    /// Builds the tables for a root system.
    pub fn new(rs: Arc<RootSystem>, field: F) -> Self {
        let n = rs.rank();
        let qn: Vec<F::E> =
            (0..=MAX_MODE).map(|k| field.from_scalar(&qnum_rs(k as i32)).expect("polynomial")).collect();
        let mut ann = vec![vec![Vec::new(); n + 1]; n + 1];
        for i in 1..=n {
            for j in 1..=n {
                ann[i][j] = (0..=MAX_MODE)
                    .map(|m| {
                        if m == 0 {
                            return field.zero();
                        }
                        let h = heisenberg_bracket(&rs, i, m as i32, j, -(m as i32));
                        let c = h.div(&qnum_rs(m as i32)).expect("[m] ≠ 0");
                        field.from_scalar(&c).expect("polynomial")
                    })
                    .collect();
            }
        }
        FockSpace { rs, field, qn, ann }
    }

    /// The root system.
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// Shared handle to the root system.
    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// The coefficient field.
    pub fn field(&self) -> &F {
        &self.field
    }

    /// `[n]` in the field.
    pub fn qnum(&self, n: u32) -> &F::E {
        &self.qn[n as usize]
    }

    /// The scalar by which `a_i(n)` lowers `ā_j(-n)`.
    pub fn annihilation_coeff(&self, i: usize, j: usize, n: u32) -> &F::E {
        &self.ann[i][j][n as usize]
    }

    fn check_mode(&self, l: u32) -> Result<(), FockError> {
        if l == 0 || l > MAX_MODE {
            Err(FockError::ModeOutOfRange(l, MAX_MODE))
        } else {
            Ok(())
        }
    }

    /// `a_i(l)` for `l > 0`: the derivation lowering each `ā_j(-l)`.
    pub fn act_annihilate(&self, i: usize, l: u32, v: &LinComb<F::E>) -> Result<LinComb<F::E>, FockError> {
        self.check_mode(l)?;
        let f = &self.field;
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            let mut k = 0;
            let osc = s.oscillators();
            while k < osc.len() {
                let o = osc[k];
                let m = osc[k..].iter().take_while(|&&x| x == o).count();
                if o.1 as u32 == l {
                    let coef = f.mul(c, &f.mul(&f.int(m as i64), &self.ann[i][o.0 as usize][l as usize]));
                    out.add_term(f, s.without_osc(o).expect("present"), coef);
                }
                k += m;
            }
        }
        Ok(out)
    }

    /// `a_i(-l)` for `l > 0`: multiplication by `[l] ā_i(-l)`.
    pub fn act_create(&self, i: usize, l: u32, v: &LinComb<F::E>) -> Result<LinComb<F::E>, FockError> {
        self.check_mode(l)?;
        let f = &self.field;
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            out.add_term(f, s.with_osc((i as u8, l as u8)), f.mul(c, &self.qn[l as usize]));
        }
        Ok(out)
    }

    /// `a_i(l)` for any nonzero `l`.
    pub fn act_heisenberg(&self, i: usize, l: i32, v: &LinComb<F::E>) -> Result<LinComb<F::E>, FockError> {
        if l > 0 {
            self.act_annihilate(i, l as u32, v)
        } else {
            self.act_create(i, l.unsigned_abs(), v)
        }
    }

    /// `a_i(-l)` with a window check on the results.
    pub fn act_create_checked(
        &self,
        i: usize,
        l: u32,
        v: &LinComb<F::E>,
        trunc: &Truncation,
    ) -> Result<LinComb<F::E>, FockError> {
        let out = self.act_create(i, l, v)?;
        self.check_window(&out, trunc)?;
        Ok(out)
    }

    /// `e^α`.
    pub fn act_lattice(&self, alpha: &[i32], v: &LinComb<F::E>) -> LinComb<F::E> {
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            out.add_term(&self.field, s.shifted(alpha), c.clone());
        }
        out
    }

    /// `e^α` with a window check on the results.
    pub fn act_lattice_checked(
        &self,
        alpha: &[i32],
        v: &LinComb<F::E>,
        trunc: &Truncation,
    ) -> Result<LinComb<F::E>, FockError> {
        let out = self.act_lattice(alpha, v);
        self.check_window(&out, trunc)?;
        Ok(out)
    }

    fn check_window(&self, v: &LinComb<F::E>, trunc: &Truncation) -> Result<(), FockError> {
        for (s, _) in v.iter() {
            if !trunc.contains(&self.rs, s) {
                return Err(FockError::TruncationOverflow(s.render()));
            }
        }
        Ok(())
    }

    /// Eigenvalue of a scalar diagonal operator on a state.
    pub fn diagonal_value(&self, kind: &Diagonal, s: &FockState) -> F::E {
        let f = &self.field;
        let beta = s.beta();
        match kind {
            Diagonal::Omega(i) => {
                let (a, b) = self.rs.pairing_lattice_exp(&beta, *i);
                f.mono(&Rat::ONE, 4 * a, 4 * b)
            }
            Diagonal::OmegaPrime(i) => {
                let (a, b) = self.rs.pairing_lattice_rev_exp(*i, &beta);
                f.mono(&Rat::ONE, -4 * a, -4 * b)
            }
            Diagonal::CocycleEps(alpha) => {
                let c = self.rs.cocycle(alpha, &beta);
                f.from_scalar(&c.to_scalar().expect("even power of ζ")).expect("monomial")
            }
            Diagonal::DegreeR => f.mono(&Rat::ONE, -4 * s.degree(&self.rs), 0),
            Diagonal::DegreeS => f.mono(&Rat::ONE, 0, -4 * s.degree(&self.rs)),
        }
    }

    /// Applies a scalar diagonal operator.
    pub fn act_diagonal(&self, kind: &Diagonal, v: &LinComb<F::E>) -> LinComb<F::E> {
        let f = &self.field;
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            out.add_term(f, s.clone(), f.mul(c, &self.diagonal_value(kind, s)));
        }
        out
    }

    /// Exponent of `z^{α_i(0)}` on a state: `(α_i, β)`.
    pub fn z_power(&self, i: usize, s: &FockState) -> i32 {
        self.rs.bilinear_form(&self.rs.simple_root(i), &s.beta())
    }

    /// Exponent of `ε_k(0)` on a state: `(ε_k, β)`.
    pub fn eps_exponent(&self, k: usize, s: &FockState) -> Rat {
        self.rs.eps_pairing(k, &s.beta())
    }

    /// Value of the lattice cocycle `ε_0(α, β)` on a state.
    pub fn cocycle_value(&self, alpha: &[i32], s: &FockState) -> CocycleValue {
        self.rs.cocycle(alpha, &s.beta())
    }

    /// Coefficient of a term re-expressed in the `a_i(-n)` basis.
    pub fn a_basis_coeff(&self, s: &FockState, c: &F::E) -> F::E {
        let f = &self.field;
        let mut den = f.one();
        for &(_, n) in s.oscillators() {
            den = f.mul(&den, &self.qn[n as usize]);
        }
        f.mul(c, &f.inv(&den).expect("[n] ≠ 0"))
    }

    /// Text form `c · a_1(-2)^2 ⊗ e^{[..]} + …` in the `a_i(-n)` basis.
    pub fn render(&self, v: &LinComb<F::E>) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = v
            .iter()
            .map(|(s, c)| format!("({}) {}", self.field.render(&self.a_basis_coeff(s, c)), s.render()))
            .collect();
        parts.join(" + ")
    }

    /// Terms as `(state, rendered a-basis coefficient)` pairs.
    pub fn render_terms(&self, v: &LinComb<F::E>) -> Vec<(String, String)> {
        v.iter().map(|(s, c)| (s.render(), self.field.render(&self.a_basis_coeff(s, c)))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExactField, PointField};
    use proptest::prelude::*;

    fn space(name: &str) -> FockSpace<ExactField> {
        FockSpace::new(Arc::new(RootSystem::from_name(name).unwrap()), ExactField)
    }

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn vac(sp: &FockSpace<ExactField>) -> LinComb<Scalar> {
        LinComb::single(&ExactField, FockState::vacuum(sp.root_system().rank()), Scalar::one())
    }

    #[test]
    fn bracket_examples() {
        let rs = RootSystem::from_name("A2").unwrap();
        assert!(heisenberg_bracket(&rs, 1, 1, 1, 1).is_zero());
        assert_eq!(heisenberg_bracket(&rs, 1, 1, 1, -1), sc("(r*s)^(-1/2)*(r+s)"));
        assert_eq!(heisenberg_bracket(&rs, 1, 1, 2, -1), sc("-1"));
        // Antisymmetry.
        assert_eq!(heisenberg_bracket(&rs, 1, -2, 1, 2), heisenberg_bracket(&rs, 1, 2, 1, -2).neg());
    }

    #[test]
    fn annihilate_and_create_examples() {
        let sp = space("A2");
        let f = ExactField;
        let v = vac(&sp);
        assert!(sp.act_annihilate(1, 1, &v).unwrap().is_zero());
        let one = sp.act_create(1, 1, &v).unwrap();
        let back = sp.act_annihilate(1, 1, &one).unwrap();
        assert_eq!(back, v.scale(&f, &sc("(r*s)^(-1/2)*(r+s)")));
        let two = sp.act_create(1, 1, &one).unwrap();
        assert!(sp.act_annihilate(1, 2, &two).unwrap().is_zero());
        let x = sp.act_create(2, 2, &one).unwrap();
        let y = sp.act_create(1, 1, &sp.act_create(2, 2, &v).unwrap()).unwrap();
        assert_eq!(x, y);
        assert!(sp.render(&one).contains("a_1(-1)"));
        assert_eq!(sp.render(&LinComb::<Scalar>::zero()), "0");
        assert!(matches!(sp.act_create(1, 0, &v), Err(FockError::ModeOutOfRange(0, _))));
    }

    #[test]
    fn lattice_and_diagonal_examples() {
        let sp = space("A2");
        let v = vac(&sp);
        let e1 = sp.act_lattice(&[1, 0], &v);
        assert_eq!(e1.iter().next().unwrap().0.beta(), vec![1, 0]);
        assert_eq!(sp.act_lattice(&[-1, 0], &e1), v);
        assert_eq!(sp.act_diagonal(&Diagonal::Omega(1), &v), v);
        let w = sp.act_diagonal(&Diagonal::Omega(1), &e1);
        assert_eq!(w, e1.scale(&ExactField, &sc("r*s^-1")));
        let s = e1.iter().next().unwrap().0.clone();
        assert_eq!(sp.z_power(2, &s), -1);
        assert_eq!(sp.eps_exponent(1, &s), Rat::ONE);
        assert_eq!(sp.eps_exponent(2, &s), Rat::int(-1));
        let t = Truncation { max_osc_degree: 0, beta_box: 2 };
        assert!(sp.act_lattice_checked(&[1, 0], &v, &t).is_err());
        assert!(sp.act_create_checked(1, 1, &v, &t).is_err());
        assert_eq!(sp.diagonal_value(&Diagonal::DegreeR, &s), sc("r^-1"));
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let rs = RootSystem::from_name("A2").unwrap();
        let t = Truncation { max_osc_degree: 2, beta_box: 1 };
        let states = t.enumerate(&rs);
        // Degree 0: vacuum. Degree 1: roots ±α1, ±α2, ±(α1+α2), and a_1(-1), a_2(-1).
        assert_eq!(states[0], FockState::vacuum(2));
        assert_eq!(states.iter().filter(|s| s.degree(&rs) == 1).count(), 8);
        assert!(states.windows(2).all(|w| w[0].degree(&rs) <= w[1].degree(&rs)));
        assert!(states.iter().all(|s| t.contains(&rs, s)));
        let mut dedup = states.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), states.len());
        assert_eq!(partitions(4).len(), 5);
    }

    #[test]
    fn heisenberg_relation_on_window() {
        for name in ["A2", "D4"] {
            let sp = space(name);
            let rs = sp.root_system().clone();
            let f = ExactField;
            let t = Truncation { max_osc_degree: 3, beta_box: 1 };
            let states = t.enumerate(&rs);
            for i in 1..=rs.rank() {
                for j in 1..=rs.rank() {
                    for m in 1..=3 {
                        let h = heisenberg_bracket(&rs, i, m, j, -m);
                        for s in states.iter().filter(|s| s.osc_degree() <= 2) {
                            let v = LinComb::single(&f, s.clone(), Scalar::one());
                            let ab = sp.act_annihilate(i, m as u32, &sp.act_create(j, m as u32, &v).unwrap()).unwrap();
                            let ba = sp.act_create(j, m as u32, &sp.act_annihilate(i, m as u32, &v).unwrap()).unwrap();
                            assert_eq!(ab.sub(&f, &ba), v.scale(&f, &h), "{name} {i} {j} {m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_field_render() {
        let rs = Arc::new(RootSystem::from_name("A2").unwrap());
        let sp = FockSpace::new(rs, PointField::new(Rat::int(2), Rat::int(3)).unwrap());
        let v = LinComb::single(sp.field(), FockState::vacuum(2), Rat::ONE);
        let w = sp.act_create(1, 2, &v).unwrap();
        // [2] at r = 16, s = 81 is 97; rendering divides it back out.
        assert_eq!(w.iter().next().unwrap().1, &Rat::int(97));
        assert!(sp.render(&w).starts_with("(1) a_1(-2)"));
    }

    proptest! {
        #[test]
        fn degree_shift_of_annihilators(l in 1u32..3, i in 1usize..3, j in 1usize..3, n in 1u32..3) {
            let sp = space("A2");
            let v = sp.act_create(j, n, &vac(&sp)).unwrap();
            let d0 = v.iter().next().unwrap().0.degree(sp.root_system());
            let w = sp.act_annihilate(i, l, &v).unwrap();
            for (s, _) in w.iter() {
                prop_assert_eq!(s.degree(sp.root_system()), d0 - l as i32);
            }
        }

        #[test]
        fn diagonal_operators_commute(i in 1usize..3, j in 1usize..3, b1 in -2i32..3, b2 in -2i32..3) {
            let sp = space("A2");
            let v = LinComb::single(&ExactField, FockState::new(&[(1, 1)], &[b1, b2]), Scalar::one());
            let x = sp.act_diagonal(&Diagonal::Omega(i), &sp.act_diagonal(&Diagonal::OmegaPrime(j), &v));
            let y = sp.act_diagonal(&Diagonal::OmegaPrime(j), &sp.act_diagonal(&Diagonal::Omega(i), &v));
            prop_assert_eq!(x, y);
            let e = sp.act_lattice(&[1, 0], &sp.act_annihilate(i, 1, &v).unwrap());
            let e2 = sp.act_annihilate(i, 1, &sp.act_lattice(&[1, 0], &v)).unwrap();
            prop_assert_eq!(e, e2);
        }
    }
}
