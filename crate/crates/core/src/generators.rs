//! Side-pairing transformations of a special polygon, as elements of
//! PSL(2, ℤ).

use std::fmt;

use crate::arith::ext_gcd;
use crate::error::{Error, Result};
use crate::farey::{FareyFraction, FareySequence};
use crate::gamma0::{classify_denominators, sides_paired, Level, SideClass, SideLabel};

/// A 2×2 integer matrix of determinant 1, stored with the PSL(2, ℤ) sign
/// convention: the first nonzero entry of the bottom row is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    m: [i128; 4],
}

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix { m: [1, 0, 0, 1] };

    /// Returns `None` unless `m11·m22 − m12·m21 = 1`.
    pub fn new(m11: i128, m12: i128, m21: i128, m22: i128) -> Option<Self> {
        let det = m11.checked_mul(m22)?.checked_sub(m12.checked_mul(m21)?)?;
        (det == 1).then(|| Self::canonical([m11, m12, m21, m22]))
    }

    fn canonical(m: [i128; 4]) -> Self {
        let flip = m[2] < 0 || (m[2] == 0 && m[3] < 0);
        if flip {
            UnimodularMatrix { m: [-m[0], -m[1], -m[2], -m[3]] }
        } else {
            UnimodularMatrix { m }
        }
    }

    /// `[[1, w], [0, 1]]`.
    pub fn translation(w: i128) -> Self {
        UnimodularMatrix { m: [1, w, 0, 1] }
    }

    /// Some matrix with first column `(num, den)`, i.e. sending infinity to
    /// `num/den`. Requires `gcd(num, den) = 1`.
    pub fn sending_infinity_to(num: i64, den: i64) -> Self {
        let (g, s, t) = ext_gcd(num as i128, den as i128);
        debug_assert_eq!(g, 1);
        // num·s + den·t = 1, so [[num, -t], [den, s]] has determinant 1.
        Self::canonical([num as i128, -t, den as i128, s])
    }

    pub fn entries(&self) -> [i128; 4] {
        self.m
    }

    pub fn lower_left(&self) -> i128 {
        self.m[2]
    }

    pub fn determinant(&self) -> i128 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Self::canonical([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::canonical([d, -b, -c, a])
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn in_gamma0(&self, level: &Level) -> bool {
        self.m[2] % level.value() as i128 == 0
    }

    /// Möbius action on a point `num/den` of ℚ ∪ {∞}, returned as a
    /// primitive pair with non-negative denominator (infinity is `(1, 0)`).
    pub fn apply_pair(&self, num: i128, den: i128) -> (i128, i128) {
        let [a, b, c, d] = self.m;
        let (p, q) = (a * num + b * den, c * num + d * den);
        if q < 0 || (q == 0 && p < 0) {
            (-p, -q)
        } else {
            (p, q)
        }
    }

    pub fn apply(&self, x: FareyFraction) -> (i128, i128) {
        self.apply_pair(x.num() as i128, x.den() as i128)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

fn dens(s: (FareyFraction, FareyFraction)) -> (i64, i64) {
    (s.0.den(), s.1.den())
}

fn check_side(s: (FareyFraction, FareyFraction)) -> Result<()> {
    if s.0.cross(s.1) != 1 {
        return Err(Error::NotNeighbors(s.0, s.1));
    }
    Ok(())
}

/// Matrix of determinant 1 whose columns are the endpoints of the side:
/// `[[c, -d], [a, -b]]` for the side `(c/a, d/b)`.
fn side_frame(s: (FareyFraction, FareyFraction)) -> UnimodularMatrix {
    let (c, a) = (s.0.num() as i128, s.0.den() as i128);
    let (d, b) = (s.1.num() as i128, s.1.den() as i128);
    UnimodularMatrix::canonical([c, -d, a, -b])
}

/// The element of Γ0(N) gluing side `s = (c/a, d/b)` to side
/// `t = (w/x, z/y)`: it sends `c/a ↦ z/y` and `d/b ↦ w/x`, and its lower-left
/// entry is `a·x + b·y`.
pub fn pairing_matrix(
    s: (FareyFraction, FareyFraction),
    t: (FareyFraction, FareyFraction),
    level: &Level,
) -> Result<UnimodularMatrix> {
    check_side(s)?;
    check_side(t)?;
    if !sides_paired(dens(s), dens(t), level) {
        return Err(Error::NotPaired(dens(s), dens(t)));
    }
    let (c, a) = (s.0.num() as i128, s.0.den() as i128);
    let (d, b) = (s.1.num() as i128, s.1.den() as i128);
    let (w, x) = (t.0.num() as i128, t.0.den() as i128);
    let (z, y) = (t.1.num() as i128, t.1.den() as i128);
    Ok(UnimodularMatrix::canonical([
        z * b + w * a,
        -(z * d + w * c),
        a * x + b * y,
        -(y * d + x * c),
    ]))
}

/// Order-2 element fixing an even side setwise and swapping its endpoints.
pub fn even_self_pairing(
    s: (FareyFraction, FareyFraction),
    level: &Level,
) -> Result<UnimodularMatrix> {
    check_side(s)?;
    if classify_denominators(s.0.den(), s.1.den(), level) != SideClass::Even {
        return Err(Error::WrongSideKind(dens(s), "even"));
    }
    let frame = side_frame(s);
    let rotation = UnimodularMatrix::canonical([0, -1, 1, 0]);
    Ok(frame.mul(&rotation).mul(&frame.inverse()))
}

/// Order-3 element permuting `c/a → d/b → (c+d)/(a+b) → c/a` for an odd side.
pub fn odd_self_pairing(
    s: (FareyFraction, FareyFraction),
    level: &Level,
) -> Result<UnimodularMatrix> {
    check_side(s)?;
    if classify_denominators(s.0.den(), s.1.den(), level) != SideClass::Odd {
        return Err(Error::WrongSideKind(dens(s), "odd"));
    }
    let frame = side_frame(s);
    let rotation = UnimodularMatrix::canonical([0, -1, 1, 1]);
    Ok(frame.mul(&rotation).mul(&frame.inverse()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Pairing,
    Even,
    Odd,
}

/// One side-pairing generator, attached to the side it acts on. For a
/// paired couple the generator lives on the left member and maps it onto
/// `partner`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub side: usize,
    pub partner: Option<usize>,
    pub kind: GeneratorKind,
    pub matrix: UnimodularMatrix,
}

/// All side pairings of a complete, labeled sequence.
pub fn generator_set(seq: &FareySequence, level: &Level) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    for i in 0..seq.side_count() {
        let side = seq.side(i);
        let generator = match seq.label(i) {
            None => return Err(Error::Structural(format!("side {i} is unlabeled"))),
            Some(SideLabel::Free) => {
                let free = seq.labels().iter().filter(|l| **l == Some(SideLabel::Free)).count();
                return Err(Error::FreeSidesRemain(free));
            }
            Some(SideLabel::Even) => Generator {
                side: i,
                partner: None,
                kind: GeneratorKind::Even,
                matrix: even_self_pairing(side, level)?,
            },
            Some(SideLabel::Odd) => Generator {
                side: i,
                partner: None,
                kind: GeneratorKind::Odd,
                matrix: odd_self_pairing(side, level)?,
            },
            Some(SideLabel::Paired(j)) if j > i => Generator {
                side: i,
                partner: Some(j),
                kind: GeneratorKind::Pairing,
                matrix: pairing_matrix(side, seq.side(j), level)?,
            },
            Some(SideLabel::Paired(_)) => continue,
        };
        out.push(generator);
    }
    Ok(out)
}
