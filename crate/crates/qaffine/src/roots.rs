//! Root data for the affine types `A_ℓ^{(1)}`, `D_n^{(1)}` and `E_6^{(1)}`.
//!
//! Nodes are numbered `0..=n` with `0` the affine node. Finite lattice
//! points `β = Σ b_i α_i` are stored as integer vectors indexed by `i - 1`.
//! The two-parameter pairing `⟨i,j⟩ = ⟨ω_i', ω_j⟩` is a monomial
//! `r^a s^b` for every entry, so it is stored as the integer pair `(a, b)`.

use serde::Serialize;

use crate::scalars::{Rat, Scalar};

/// Errors raised while building root data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootsError {
    /// The requested family/rank is not supported.
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
}

/// Family of a simply-laced affine diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// `A_ℓ^{(1)}`.
    A,
    /// `D_n^{(1)}`.
    D,
    /// `E_6^{(1)}`.
    E,
}

/// A family together with its finite rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LieType {
    /// Diagram family.
    pub family: Family,
    /// Finite rank (number of finite nodes).
    pub rank: usize,
}

impl LieType {
    /// `A_ℓ`, `D_n` or `E_6`.
    pub fn new(family: Family, rank: usize) -> Result<Self, RootsError> {
        let ok = match family {
            Family::A => (2..=12).contains(&rank),
            Family::D => (4..=12).contains(&rank),
            Family::E => rank == 6,
        };
        if ok {
            Ok(LieType { family, rank })
        } else {
            Err(RootsError::UnsupportedType(format!("{family:?}{rank}")))
        }
    }

    /// Parses names such as `A2`, `D4`, `E6`.
    pub fn parse(name: &str) -> Result<Self, RootsError> {
        let bad = || RootsError::UnsupportedType(name.to_string());
        let mut chars = name.trim().chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        LieType::new(family, rank)
    }
}

impl std::fmt::Display for LieType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// The sign `±` labelling raising and lowering generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub enum Sign {
    /// `+`.
    #[serde(rename = "+")]
    Plus,
    /// `−`.
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// The opposite sign.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Both signs, `+` first.
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    /// `"+"` or `"-"`.
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// A point of the finite root lattice, coefficients over `α_1..α_n`.
pub type LatticePoint = Vec<i32>;

/// Exponents `(a, b)` of a monomial `r^a s^b`.
pub type MonoExp = (i32, i32);

/// A value of the lattice cocycle, `ζ^k (rs)^{h/2}` with
/// `ζ = (-1)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CocycleValue {
    /// Power of `ζ`, reduced mod 4.
    pub zeta_power: u8,
    /// Exponent of `(rs)` in half units.
    pub rs_halves: i32,
}

impl CocycleValue {
    /// The identity value.
    pub const ONE: CocycleValue = CocycleValue { zeta_power: 0, rs_halves: 0 };

    /// Product.
    pub fn mul(self, o: CocycleValue) -> CocycleValue {
        CocycleValue { zeta_power: (self.zeta_power + o.zeta_power) % 4, rs_halves: self.rs_halves + o.rs_halves }
    }

    /// Integer power (negative allowed).
    pub fn pow(self, e: i32) -> CocycleValue {
        CocycleValue { zeta_power: (self.zeta_power as i32 * e).rem_euclid(4) as u8, rs_halves: self.rs_halves * e }
    }

    /// The value as a scalar, when no odd power of `ζ` remains.
    pub fn to_scalar(self) -> Option<Scalar> {
        let m = Scalar::rs_half(self.rs_halves);
        match self.zeta_power {
            0 => Some(m),
            2 => Some(m.neg()),
            _ => None,
        }
    }
}

/// Sign and monomial `± r^{a/2} s^{b/2}` (half units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedHalfMono {
    /// `+1` or `-1`.
    pub sign: i8,
    /// Exponent of `r` in half units.
    pub r_halves: i32,
    /// Exponent of `s` in half units.
    pub s_halves: i32,
}

impl SignedHalfMono {
    /// As a scalar.
    pub fn to_scalar(self) -> Scalar {
        Scalar::mono(Rat::int(self.sign as i64), 2 * self.r_halves, 2 * self.s_halves)
    }
}

/// Static data of an affine root system.
#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: LieType,
    cartan: Vec<Vec<i32>>,
    pairing: Vec<Vec<MonoExp>>,
    eps_coords: Vec<Vec<Rat>>,
    theta_eps: Vec<Rat>,
    theta: LatticePoint,
    theta_word: Vec<usize>,
    coxeter_h: usize,
    iso_constant_a: Scalar,
}

fn affine_cartan(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i32>> {
    let mut c = vec![vec![0; n + 1]; n + 1];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        c[i][j] = -1;
        c[j][i] = -1;
    }
    c
}

fn unit(dim: usize, k: usize) -> Vec<Rat> {
    let mut v = vec![Rat::ZERO; dim];
    v[k] = Rat::ONE;
    v
}

fn vsum(a: &[Rat], b: &[Rat], sign: i64) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x.add(&y.mul(&Rat::int(sign)))).collect()
}

impl RootSystem {
    /// Builds the data for a supported type.
    pub fn build(t: LieType) -> Result<Self, RootsError> {
        let t = LieType::new(t.family, t.rank)?;
        Ok(match t.family {
            Family::A => Self::type_a(t.rank),
            Family::D => Self::type_d(t.rank),
            Family::E => Self::type_e6(),
        })
    }

    /// Convenience constructor from a name such as `"D4"`.
    pub fn from_name(name: &str) -> Result<Self, RootsError> {
        Self::build(LieType::parse(name)?)
    }

    fn type_a(l: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (0..l).map(|i| (i, i + 1)).collect();
        edges.push((l, 0));
        let cartan = affine_cartan(l, &edges);
        let mut pairing = vec![vec![(0, 0); l + 1]; l + 1];
        for (i, row) in pairing.iter_mut().enumerate() {
            row[i] = (1, -1);
        }
        for i in 0..=l {
            let j = (i + 1) % (l + 1);
            pairing[i][j] = (-1, 0);
            pairing[j][i] = (0, 1);
        }
        let dim = l + 1;
        let eps_coords = (0..l).map(|i| vsum(&unit(dim, i), &unit(dim, i + 1), -1)).collect();
        let theta_eps = vsum(&unit(dim, 0), &unit(dim, l), -1);
        RootSystem {
            lie_type: LieType { family: Family::A, rank: l },
            cartan,
            pairing,
            eps_coords,
            theta_eps,
            theta: vec![1; l],
            theta_word: (1..=l).collect(),
            coxeter_h: l + 1,
            iso_constant_a: Scalar::one(),
        }
    }

    fn type_d(n: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 2, n));
        edges.push((0, 2));
        let cartan = affine_cartan(n, &edges);
        let mut pairing = vec![vec![(0, 0); n + 1]; n + 1];
        for (i, row) in pairing.iter_mut().enumerate() {
            row[i] = (1, -1);
        }
        for &(i, j) in edges.iter().filter(|e| e.0 != 0) {
            pairing[i][j] = (-1, 0);
            pairing[j][i] = (0, 1);
        }
        pairing[n - 1][n] = (-1, -1);
        pairing[n][n - 1] = (1, 1);
        pairing[0][1] = (-1, -1);
        pairing[1][0] = (1, 1);
        pairing[0][2] = (-1, 0);
        pairing[2][0] = (0, 1);
        pairing[0][n] = (2, 2);
        pairing[n][0] = (-2, -2);
        let mut eps_coords: Vec<Vec<Rat>> = (0..n - 1).map(|i| vsum(&unit(n, i), &unit(n, i + 1), -1)).collect();
        eps_coords.push(vsum(&unit(n, n - 2), &unit(n, n - 1), 1));
        let theta_eps = vsum(&unit(n, 0), &unit(n, 1), 1);
        let mut theta = vec![2; n];
        theta[0] = 1;
        theta[n - 2] = 1;
        theta[n - 1] = 1;
        let mut word: Vec<usize> = (1..=n - 2).collect();
        word.push(n);
        word.extend((2..=n - 1).rev());
        RootSystem {
            lie_type: LieType { family: Family::D, rank: n },
            cartan,
            pairing,
            eps_coords,
            theta_eps,
            theta,
            theta_word: word,
            coxeter_h: 2 * n - 2,
            iso_constant_a: Scalar::rs_half(2 * (n as i32 - 2)),
        }
    }

    fn type_e6() -> Self {
        let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (0, 2)];
        let cartan = affine_cartan(6, &edges);
        let (a, b, c, d, e, f, g, h) = ((1, -1), (-1, -1), (-2, -1), (1, 1), (-1, 0), (0, 1), (1, 2), (0, 0));
        let pairing = vec![
            vec![a, b, c, b, d, d, d],
            vec![d, a, h, e, h, h, h],
            vec![g, h, a, h, e, h, h],
            vec![d, f, h, a, e, h, h],
            vec![b, h, f, f, a, e, h],
            vec![b, h, h, h, f, a, e],
            vec![b, h, h, h, h, f, a],
        ];
        let half = Rat::new(1, 2);
        let mut a1 = vec![half.neg(); 8];
        a1[0] = half.clone();
        a1[7] = half.clone();
        let eps_coords = vec![
            a1,
            vsum(&unit(8, 0), &unit(8, 1), 1),
            vsum(&unit(8, 1), &unit(8, 0), -1),
            vsum(&unit(8, 2), &unit(8, 1), -1),
            vsum(&unit(8, 3), &unit(8, 2), -1),
            vsum(&unit(8, 4), &unit(8, 3), -1),
        ];
        let mut theta_eps = vec![half.clone(); 8];
        theta_eps[5] = half.neg();
        theta_eps[6] = half.neg();
        RootSystem {
            lie_type: LieType { family: Family::E, rank: 6 },
            cartan,
            pairing,
            eps_coords,
            theta_eps,
            theta: vec![1, 2, 2, 3, 2, 1],
            theta_word: vec![1, 3, 4, 5, 6, 2, 4, 3, 5, 4, 2],
            coxeter_h: 12,
            iso_constant_a: Scalar::rs_half(8),
        }
    }

    /// Type and rank.
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    /// Finite rank `n`.
    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    /// Affine Cartan entry `a_{ij}`, `i, j ∈ 0..=n`.
    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    /// Exponents of `⟨i,j⟩ = r^a s^b`.
    pub fn pairing_exp(&self, i: usize, j: usize) -> MonoExp {
        self.pairing[i][j]
    }

    /// `⟨i,j⟩` as a scalar.
    pub fn pairing(&self, i: usize, j: usize) -> Scalar {
        let (a, b) = self.pairing[i][j];
        Scalar::mono(Rat::ONE, 4 * a, 4 * b)
    }

    /// ε-coordinates of `α_i`, `i ∈ 1..=n`.
    pub fn eps_coords(&self, i: usize) -> &[Rat] {
        &self.eps_coords[i - 1]
    }

    /// ε-coordinates of `θ`, used to build the affine simple root.
    pub fn theta_eps(&self) -> &[Rat] {
        &self.theta_eps
    }

    /// Coefficients of `θ` over the simple roots.
    pub fn theta(&self) -> &LatticePoint {
        &self.theta
    }

    /// The fixed word `(i_1, …, i_{h-1})` with `Σ α_{i_l} = θ`.
    pub fn theta_word(&self) -> &[usize] {
        &self.theta_word
    }

    /// Coxeter number `h`.
    pub fn coxeter_h(&self) -> usize {
        self.coxeter_h
    }

    /// The constant `a` of the Drinfeld isomorphism.
    pub fn iso_constant_a(&self) -> &Scalar {
        &self.iso_constant_a
    }

    /// Level of the vertex representation.
    pub fn level_c(&self) -> i32 {
        1
    }

    /// The lattice point `α_i`, `i ∈ 1..=n`.
    pub fn simple_root(&self, i: usize) -> LatticePoint {
        let mut v = vec![0; self.rank()];
        v[i - 1] = 1;
        v
    }

    /// Sum of `α_i` over a word.
    pub fn word_root(&self, word: &[usize]) -> LatticePoint {
        let mut v = vec![0; self.rank()];
        for &i in word {
            v[i - 1] += 1;
        }
        v
    }

    /// Exponents of `⟨β, i⟩ = Π_j ⟨j,i⟩^{b_j}`.
    pub fn pairing_lattice_exp(&self, beta: &[i32], i: usize) -> MonoExp {
        let mut e = (0, 0);
        for (j, &b) in beta.iter().enumerate() {
            let (x, y) = self.pairing[j + 1][i];
            e.0 += b * x;
            e.1 += b * y;
        }
        e
    }

    /// Exponents of `⟨i, β⟩ = Π_j ⟨i,j⟩^{b_j}`.
    pub fn pairing_lattice_rev_exp(&self, i: usize, beta: &[i32]) -> MonoExp {
        let mut e = (0, 0);
        for (j, &b) in beta.iter().enumerate() {
            let (x, y) = self.pairing[i][j + 1];
            e.0 += b * x;
            e.1 += b * y;
        }
        e
    }

    /// `⟨β, i⟩`, the eigenvalue of `ω_i` on the sector `e^β`.
    pub fn pairing_lattice(&self, beta: &[i32], i: usize) -> Scalar {
        let (a, b) = self.pairing_lattice_exp(beta, i);
        Scalar::mono(Rat::ONE, 4 * a, 4 * b)
    }

    /// `⟨i, β⟩`; `ω_i'` acts on `e^β` by its inverse.
    pub fn pairing_lattice_rev(&self, i: usize, beta: &[i32]) -> Scalar {
        let (a, b) = self.pairing_lattice_rev_exp(i, beta);
        Scalar::mono(Rat::ONE, 4 * a, 4 * b)
    }

    /// Exponents of `⟨β, γ⟩ = Π ⟨i,j⟩^{b_i c_j}` for two lattice points.
    pub fn pairing_bilattice_exp(&self, beta: &[i32], gamma: &[i32]) -> MonoExp {
        let mut e = (0, 0);
        for (i, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let (x, y) = self.pairing_lattice_rev_exp(i + 1, gamma);
            e.0 += b * x;
            e.1 += b * y;
        }
        e
    }

    /// `(α, β)` through the Cartan matrix.
    pub fn bilinear_form(&self, alpha: &[i32], beta: &[i32]) -> i32 {
        let mut acc = 0;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.iter().enumerate() {
                acc += a * b * self.cartan[i + 1][j + 1];
            }
        }
        acc
    }

    /// ε-coordinates of a lattice point.
    pub fn eps_of(&self, beta: &[i32]) -> Vec<Rat> {
        let dim = self.eps_coords[0].len();
        let mut v = vec![Rat::ZERO; dim];
        for (i, &b) in beta.iter().enumerate() {
            for (k, c) in self.eps_coords[i].iter().enumerate() {
                v[k] = v[k].add(&c.mul(&Rat::int(b as i64)));
            }
        }
        v
    }

    /// `(α, β)` computed from ε-coordinates.
    pub fn bilinear_form_eps(&self, alpha: &[i32], beta: &[i32]) -> Rat {
        let a = self.eps_of(alpha);
        let b = self.eps_of(beta);
        a.iter().zip(&b).fold(Rat::ZERO, |acc, (x, y)| acc.add(&x.mul(y)))
    }

    /// `(ε_k, β)`, the eigenvalue of `ε_k(0)` on `e^β` (`k` is 1-based).
    pub fn eps_pairing(&self, k: usize, beta: &[i32]) -> Rat {
        self.eps_of(beta)[k - 1].clone()
    }

    /// The lattice cocycle on simple roots, `i, j ∈ 1..=n`.
    pub fn cocycle_simple(&self, i: usize, j: usize) -> CocycleValue {
        if i == j {
            CocycleValue { zeta_power: 0, rs_halves: 1 }
        } else if i > j {
            let a = self.cartan[i][j];
            CocycleValue { zeta_power: a.rem_euclid(4) as u8, rs_halves: a }
        } else {
            CocycleValue::ONE
        }
    }

    /// Bimultiplicative extension of [`Self::cocycle_simple`].
    pub fn cocycle(&self, alpha: &[i32], beta: &[i32]) -> CocycleValue {
        let mut acc = CocycleValue::ONE;
        for (i, &a) in alpha.iter().enumerate() {
            for (j, &b) in beta.iter().enumerate() {
                if a != 0 && b != 0 {
                    acc = acc.mul(self.cocycle_simple(i + 1, j + 1).pow(a * b));
                }
            }
        }
        acc
    }

    /// Cocycle used by the vertex operators:
    /// `σ_{ij} (⟨j,i⟩ s^{a_{ij}})^{1/2}` with `σ_{ij} = (-1)^{a_{ij}}` for
    /// `i > j` and `1` otherwise.
    ///
    /// It agrees with the lattice cocycle up to where the sign sits, except
    /// for the pair `(α_{n-1}, α_n)` of type D, where the nontrivial pairing
    /// of two orthogonal nodes forces a different value.
    pub fn vertex_cocycle_simple(&self, i: usize, j: usize) -> SignedHalfMono {
        let a = self.cartan[i][j];
        let (x, y) = self.pairing[j][i];
        let (x, y) = (x, y + a);
        debug_assert_eq!(x, y, "⟨j,i⟩ s^a must be a power of rs");
        let sign = if i > j && a % 2 != 0 { -1 } else { 1 };
        SignedHalfMono { sign, r_halves: x, s_halves: y }
    }

    /// Bimultiplicative extension of [`Self::vertex_cocycle_simple`] in the
    /// second argument, first argument a simple root.
    pub fn vertex_cocycle(&self, i: usize, beta: &[i32]) -> SignedHalfMono {
        let mut out = SignedHalfMono { sign: 1, r_halves: 0, s_halves: 0 };
        for (j, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let c = self.vertex_cocycle_simple(i, j + 1);
            if c.sign < 0 && b % 2 != 0 {
                out.sign = -out.sign;
            }
            out.r_halves += b * c.r_halves;
            out.s_halves += b * c.s_halves;
        }
        out
    }

    /// Cascade parameters of the root vector on `word` (innermost first).
    ///
    /// For `+` the step adding `i_m` uses `⟨ω'_{prefix}, ω_{i_m}⟩^{-1}`, for
    /// `−` it uses `⟨ω'_{i_m}, ω_{prefix}⟩`. The list has one entry fewer
    /// than the word.
    pub fn cascade_parameters(&self, word: &[usize], sign: Sign) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(word.len().saturating_sub(1));
        for m in 1..word.len() {
            let prefix = self.word_root(&word[..m]);
            let q = if sign == Sign::Plus {
                let (a, b) = self.pairing_lattice_exp(&prefix, word[m]);
                Scalar::mono(Rat::ONE, -4 * a, -4 * b)
            } else {
                self.pairing_lattice_rev(word[m], &prefix)
            };
            out.push(q);
        }
        out
    }

    /// Cascade parameters of the θ root vector (innermost first).
    pub fn theta_bracket_parameters(&self, sign: Sign) -> Vec<Scalar> {
        self.cascade_parameters(&self.theta_word, sign)
    }

    /// Serializable summary of the data, with rendered scalars.
    pub fn summary(&self) -> RootSystemSummary {
        let n = self.rank();
        RootSystemSummary {
            lie_type: self.lie_type.to_string(),
            rank: n,
            cartan: self.cartan.clone(),
            pairing: (0..=n).map(|i| (0..=n).map(|j| self.pairing(i, j).render()).collect()).collect(),
            eps_coords: self.eps_coords.iter().map(|v| v.iter().map(|c| c.to_string()).collect()).collect(),
            theta: self.theta.clone(),
            theta_word: self.theta_word.clone(),
            coxeter_h: self.coxeter_h,
            iso_constant_a: self.iso_constant_a.render(),
            level_c: self.level_c(),
        }
    }
}

/// JSON view of a [`RootSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystemSummary {
    /// Type name such as `D4`.
    pub lie_type: String,
    /// Finite rank.
    pub rank: usize,
    /// Affine Cartan matrix.
    pub cartan: Vec<Vec<i32>>,
    /// Rendered pairing matrix over `0..=n`.
    pub pairing: Vec<Vec<String>>,
    /// ε-coordinates of the finite simple roots.
    pub eps_coords: Vec<Vec<String>>,
    /// θ over the simple roots.
    pub theta: LatticePoint,
    /// θ word.
    pub theta_word: Vec<usize>,
    /// Coxeter number.
    pub coxeter_h: usize,
    /// Isomorphism constant.
    pub iso_constant_a: String,
    /// Level.
    pub level_c: i32,
}

/// The types exercised by default: `A_2`, `D_4`, `E_6`.
pub fn minimal_types() -> Vec<LieType> {
    vec![
        LieType { family: Family::A, rank: 2 },
        LieType { family: Family::D, rank: 4 },
        LieType { family: Family::E, rank: 6 },
    ]
}

/// Every supported type.
pub fn all_supported_types() -> Vec<LieType> {
    let mut v: Vec<LieType> = (2..=12).map(|r| LieType { family: Family::A, rank: r }).collect();
    v.extend((4..=12).map(|r| LieType { family: Family::D, rank: r }));
    v.push(LieType { family: Family::E, rank: 6 });
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_entries() {
        let a = RootSystem::from_name("A3").unwrap();
        assert_eq!(a.pairing(1, 2), sc("r^-1"));
        assert_eq!(a.pairing(2, 1), sc("s"));
        assert_eq!(a.pairing(0, 3), sc("s"));
        let e = RootSystem::from_name("E6").unwrap();
        assert_eq!(e.pairing(1, 2), Scalar::one());
        assert_eq!(e.pairing(1, 3), sc("r^-1"));
        assert_eq!(e.pairing(0, 2), sc("r^-2*s^-1"));
        for n in 4..=8 {
            let d = RootSystem::build(LieType::new(Family::D, n).unwrap()).unwrap();
            assert_eq!(d.pairing(0, n), sc("(r*s)^2"));
            assert_eq!(d.pairing(n, 0), sc("(r*s)^-2"));
        }
    }

    #[test]
    fn unsupported_types() {
        assert!(LieType::parse("E7").is_err());
        assert!(LieType::parse("A1").is_err());
        assert!(LieType::parse("D3").is_err());
        assert!(LieType::parse("X4").is_err());
    }

    #[test]
    fn structural_invariants_all_types() {
        for t in all_supported_types() {
            let rs = RootSystem::build(t).unwrap();
            let n = rs.rank();
            for i in 0..=n {
                assert_eq!(rs.cartan(i, i), 2);
                assert_eq!(rs.pairing_exp(i, i), (1, -1));
                for j in 0..=n {
                    let a = rs.cartan(i, j);
                    assert!(i == j || a == 0 || a == -1, "{t} a_{i}{j}");
                    let (x, y) = rs.pairing_exp(i, j);
                    let (u, v) = rs.pairing_exp(j, i);
                    assert_eq!((x + u, y + v), (a, -a), "{t} product ⟨{i},{j}⟩⟨{j},{i}⟩");
                    assert_eq!(rs.pairing(i, j).tau(), rs.pairing(j, i).inv().unwrap());
                }
            }
            assert_eq!(rs.theta_word().len(), rs.coxeter_h() - 1);
            assert_eq!(&rs.word_root(rs.theta_word()), rs.theta());
            let eps = rs.eps_of(rs.theta());
            assert_eq!(eps, rs.theta_eps(), "{t} θ ε-coordinates");
            assert_eq!(rs.bilinear_form(rs.theta(), rs.theta()), 2);
            for i in 1..=n {
                for j in 1..=n {
                    let (a, b) = (rs.simple_root(i), rs.simple_root(j));
                    assert_eq!(
                        rs.bilinear_form_eps(&a, &b),
                        Rat::int(rs.cartan(i, j) as i64),
                        "{t} ε-form on α_{i}, α_{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn affine_rows_and_columns_balance() {
        // δ = α_0 + θ pairs trivially with every node.
        for t in all_supported_types() {
            let rs = RootSystem::build(t).unwrap();
            let n = rs.rank();
            let mut delta = vec![1];
            delta.extend(rs.theta().iter().copied());
            for i in 0..=n {
                let (mut x, mut y, mut u, mut v) = (0, 0, 0, 0);
                for j in 0..=n {
                    let (a, b) = rs.pairing_exp(i, j);
                    let (c, d) = rs.pairing_exp(j, i);
                    x += delta[j] * a;
                    y += delta[j] * b;
                    u += delta[j] * c;
                    v += delta[j] * d;
                }
                assert_eq!((x, y, u, v), (0, 0, 0, 0), "{t} node {i}");
            }
        }
    }

    #[test]
    fn theta_parameters_match_reference_lists() {
        let a = RootSystem::from_name("A4").unwrap();
        assert!(a.theta_bracket_parameters(Sign::Minus).iter().all(|q| *q == sc("s")));
        assert!(a.theta_bracket_parameters(Sign::Plus).iter().all(|q| *q == sc("r")));
        for n in 4..=7 {
            let d = RootSystem::build(LieType::new(Family::D, n).unwrap()).unwrap();
            let minus = d.theta_bracket_parameters(Sign::Minus);
            let mut expect = vec![sc("s"); n - 2];
            expect.extend(vec![sc("r^-1"); n - 2]);
            assert_eq!(minus, expect, "D{n}");
            let plus = d.theta_bracket_parameters(Sign::Plus);
            let mut expect = vec![sc("r"); n - 2];
            expect.extend(vec![sc("s^-1"); n - 2]);
            assert_eq!(plus, expect, "D{n}");
        }
        let e = RootSystem::from_name("E6").unwrap();
        let minus: Vec<Scalar> = ["s", "s", "s", "s", "r^-1", "s", "r^-1", "s", "s", "r^-2*s^-1"].map(sc).to_vec();
        assert_eq!(e.theta_bracket_parameters(Sign::Minus), minus);
        let plus: Vec<Scalar> = ["r", "r", "r", "r", "s^-1", "r", "s^-1", "r", "r", "r^-1*s^-2"].map(sc).to_vec();
        assert_eq!(e.theta_bracket_parameters(Sign::Plus), plus);
    }

    #[test]
    fn cocycle_table() {
        let a = RootSystem::from_name("A2").unwrap();
        assert_eq!(a.cocycle_simple(1, 1).to_scalar(), Some(sc("(r*s)^(1/2)")));
        assert_eq!(a.cocycle_simple(1, 2), CocycleValue::ONE);
        // (-rs)^{-1/2}: an odd power of ζ, so not in the scalar ring.
        assert_eq!(a.cocycle_simple(2, 1), CocycleValue { zeta_power: 3, rs_halves: -1 });
        assert_eq!(a.cocycle_simple(2, 1).pow(2).to_scalar(), Some(sc("-(r*s)^-1")));
    }

    #[test]
    fn vertex_cocycle_values() {
        let d = RootSystem::from_name("D4").unwrap();
        assert_eq!(d.vertex_cocycle_simple(1, 1).to_scalar(), sc("(r*s)^(1/2)"));
        assert_eq!(d.vertex_cocycle_simple(2, 1).to_scalar(), sc("-(r*s)^(-1/2)"));
        assert_eq!(d.vertex_cocycle_simple(1, 2).to_scalar(), Scalar::one());
        assert_eq!(d.vertex_cocycle_simple(3, 4).to_scalar(), sc("(r*s)^(1/2)"));
        assert_eq!(d.vertex_cocycle_simple(4, 3).to_scalar(), sc("(r*s)^(-1/2)"));
    }

    #[test]
    fn lattice_pairing_examples() {
        let a = RootSystem::from_name("A2").unwrap();
        assert_eq!(a.pairing_lattice(&[1, 0], 1), sc("r*s^-1"));
        assert_eq!(a.pairing_lattice(&[0, 0], 1), Scalar::one());
        assert_eq!(a.pairing_lattice(&[1, 1], 1), sc("r"));
    }

    #[test]
    fn summary_serializes() {
        let e = RootSystem::from_name("E6").unwrap();
        let j = serde_json::to_string(&e.summary()).unwrap();
        assert!(j.contains("\"theta_word\":[1,3,4,5,6,2,4,3,5,4,2]"));
    }

    fn lattice(n: usize) -> impl Strategy<Value = Vec<i32>> {
        proptest::collection::vec(-3i32..=3, n)
    }

    proptest! {
        #[test]
        fn cocycle_is_bimultiplicative(a in lattice(6), b in lattice(6), c in lattice(6)) {
            let e = RootSystem::from_name("E6").unwrap();
            let bc: Vec<i32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            let ab: Vec<i32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert_eq!(e.cocycle(&a, &bc), e.cocycle(&a, &b).mul(e.cocycle(&a, &c)));
            prop_assert_eq!(e.cocycle(&ab, &c), e.cocycle(&a, &c).mul(e.cocycle(&b, &c)));
        }

        #[test]
        fn theta_pairing_product(t in 0usize..3) {
            let rs = RootSystem::build(minimal_types()[t]).unwrap();
            for i in 1..=rs.rank() {
                let lhs = rs.pairing_lattice(rs.theta(), i).mul(&rs.pairing_lattice_rev(i, rs.theta()));
                let k = rs.bilinear_form(rs.theta(), &rs.simple_root(i));
                prop_assert_eq!(lhs, Scalar::mono(Rat::ONE, 4 * k, -4 * k));
            }
        }
    }
}
