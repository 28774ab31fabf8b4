//! Normal-form builders for the group families that occur in the
//! classification of bicyclic 2-groups.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::group::{GroupError, GroupTable, MAX_ORDER};
use crate::product;

/// Parameters selecting one presentation.
///
/// For `cyclic`, `dihedral`, `quaternion`, `semidihedral` and `modular`, `n`
/// is the base-2 logarithm of the order. For `homocyclic` and `wreath`, `n`
/// is the logarithm of the order of the cyclic factor. The `janko` family is
/// the three-generator presentation
/// `<v, x, a | v^(2^n), x^2 = z^x_sq, a^(2^m) = z^a_pow, xvx^-1 = v^-1,
/// ava^-1 = v^(-1+2^i), axa^-1 = vx>` with `z = v^(2^(n-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Cyclic { n: u32 },
    Homocyclic { n: u32 },
    Dihedral { n: u32 },
    Quaternion { n: u32 },
    Semidihedral { n: u32 },
    Modular { n: u32 },
    Wreath { n: u32 },
    MinNonabelian { r: u32, s: u32 },
    #[serde(rename = "direct_C2m_x_C2sq")]
    DirectC2mXC2sq { m: u32 },
    #[serde(rename = "direct_C2m_x_Q8")]
    DirectC2mXQ8 { m: u32 },
    #[serde(rename = "central_C2m_Q8")]
    CentralC2mQ8 { m: u32 },
    Janko { n: u32, m: u32, i: u32, x_sq: u8, a_pow: u8 },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match *self {
            Cyclic { n } => write!(f, "C{}", 1u64 << n),
            Homocyclic { n } => write!(f, "C{0}xC{0}", 1u64 << n),
            Dihedral { n } => write!(f, "D{}", 1u64 << n),
            Quaternion { n } => write!(f, "Q{}", 1u64 << n),
            Semidihedral { n } => write!(f, "SD{}", 1u64 << n),
            Modular { n } => write!(f, "M{}", 1u64 << n),
            Wreath { n } => write!(f, "C{}wrC2", 1u64 << n),
            MinNonabelian { r, s } => write!(f, "MNA({r},{s})"),
            DirectC2mXC2sq { m } => write!(f, "C{}xC2^2", 1u64 << m),
            DirectC2mXQ8 { m } => write!(f, "C{}xQ8", 1u64 << m),
            CentralC2mQ8 { m } => write!(f, "C{}*Q8", 1u64 << m),
            Janko { n, m, i, x_sq, a_pow } => {
                write!(f, "J(n={n},m={m},i={i},xsq={x_sq},apow={a_pow})")
            }
        }
    }
}

fn bad(msg: impl Into<String>) -> GroupError {
    GroupError::BadParameters(msg.into())
}

impl FamilySpec {
    /// `log2` of the order of the constructed group.
    pub fn log_order(&self) -> u32 {
        use FamilySpec::*;
        match *self {
            Cyclic { n } | Dihedral { n } | Quaternion { n } | Semidihedral { n } | Modular { n } => n,
            Homocyclic { n } => 2 * n,
            Wreath { n } => 2 * n + 1,
            MinNonabelian { r, s } => r + s + 1,
            DirectC2mXC2sq { m } => m + 2,
            DirectC2mXQ8 { m } => m + 3,
            CentralC2mQ8 { m } => m + 2,
            Janko { n, m, .. } => n + m + 1,
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        use FamilySpec::*;
        let ok = match *self {
            Cyclic { .. } => true,
            Homocyclic { n } => n >= 1,
            Dihedral { n } | Quaternion { n } => n >= 3,
            Semidihedral { n } | Modular { n } => n >= 4,
            Wreath { n } => n >= 1,
            MinNonabelian { r, s } => r >= s && s >= 1,
            DirectC2mXC2sq { m } | DirectC2mXQ8 { m } => m >= 1,
            CentralC2mQ8 { m } => m >= 2,
            Janko { n, m, i, x_sq, a_pow } => {
                n >= 2
                    && m >= 1
                    && i >= 2.max((n + 1).saturating_sub(m))
                    && i <= n
                    && x_sq <= 1
                    && a_pow <= 1
            }
        };
        if !ok {
            return Err(bad(format!("invalid parameters for {self}")));
        }
        if self.log_order() > MAX_ORDER.trailing_zeros() {
            return Err(bad(format!("{self} has order above {MAX_ORDER}")));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<GroupTable, GroupError> {
        self.validate()?;
        use FamilySpec::*;
        match *self {
            Cyclic { n } => metacyclic(n, 0, 1, 0),
            Homocyclic { n } => metacyclic(n, n, 1, 0),
            Dihedral { n } => metacyclic(n - 1, 1, (1 << (n - 1)) - 1, 0),
            Quaternion { n } => metacyclic(n - 1, 1, (1 << (n - 1)) - 1, 1 << (n - 2)),
            Semidihedral { n } => metacyclic(n - 1, 1, (1 << (n - 2)) - 1, 0),
            Modular { n } => metacyclic(n - 1, 1, (1 << (n - 2)) + 1, 0),
            Wreath { n } => wreath(n),
            MinNonabelian { r, s } => min_nonabelian(r, s),
            DirectC2mXC2sq { m } => Ok(product::direct(
                &metacyclic(m, 0, 1, 0)?,
                &metacyclic(1, 1, 1, 0)?,
            )),
            DirectC2mXQ8 { m } => Ok(product::direct(
                &metacyclic(m, 0, 1, 0)?,
                &FamilySpec::Quaternion { n: 3 }.build()?,
            )),
            CentralC2mQ8 { m } => {
                central_over_involution(&FamilySpec::Quaternion { n: 3 }.build()?, &metacyclic(m, 0, 1, 0)?)
            }
            Janko { n, m, i, x_sq, a_pow } => janko(n, m, i, x_sq, a_pow),
        }
    }
}

/// Shorthand for [`FamilySpec::build`].
pub fn construct_family(spec: &FamilySpec) -> Result<GroupTable, GroupError> {
    spec.build()
}

/// `<a, b | a^(2^n), b^(2^k) = a^t, b a b^-1 = a^r>` in normal form
/// `a^e b^f`, indexed `e * 2^k + f`.
pub fn metacyclic(n: u32, k: u32, r: u64, t: u64) -> Result<GroupTable, GroupError> {
    let na = 1u64 << n;
    let nb = 1u64 << k;
    let order = (na * nb) as usize;
    if order > MAX_ORDER {
        return Err(bad(format!("order {order} too large")));
    }
    let r = r % na;
    let t = t % na;
    let mut rpow = vec![1u64 % na; nb as usize];
    for f in 1..nb as usize {
        rpow[f] = rpow[f - 1] * r % na;
    }
    let rule = |p: usize, q: usize| {
        let (e, f) = (p as u64 / nb, p as u64 % nb);
        let (e2, f2) = (q as u64 / nb, q as u64 % nb);
        let mut ee = e + e2 * rpow[f as usize];
        let mut ff = f + f2;
        if ff >= nb {
            ff -= nb;
            ee += t;
        }
        ((ee % na) * nb + ff) as usize
    };
    let mut gens = Vec::new();
    if na > 1 {
        gens.push(nb as usize);
    }
    if nb > 1 {
        gens.push(1);
    }
    GroupTable::from_rule(order, &gens, rule)
}

/// `C_(2^n) wr C_2` as triples `(u, w, s)`, indexed `(u * 2^n + w) * 2 + s`.
fn wreath(n: u32) -> Result<GroupTable, GroupError> {
    let q = 1usize << n;
    let order = 2 * q * q;
    let split = |p: usize| (p / 2 / q, p / 2 % q, p % 2);
    let rule = |p: usize, r: usize| {
        let (u, w, s) = split(p);
        let (u2, w2, s2) = split(r);
        let (a, b) = if s == 0 { (u2, w2) } else { (w2, u2) };
        (((u + a) % q) * q + (w + b) % q) * 2 + (s ^ s2)
    };
    GroupTable::from_rule(order, &[2 * q, 1], rule)
}

/// `<x, y | x^(2^r), y^(2^s), c = [x, y] central of order 2>` in normal form
/// `x^i y^j c^k`, indexed `(i * 2^s + j) * 2 + k`.
fn min_nonabelian(r: u32, s: u32) -> Result<GroupTable, GroupError> {
    let (nx, ny) = (1usize << r, 1usize << s);
    let order = nx * ny * 2;
    let split = |p: usize| (p / 2 / ny, p / 2 % ny, p % 2);
    let rule = |p: usize, q: usize| {
        let (i, j, k) = split(p);
        let (i2, j2, k2) = split(q);
        let c = (k + k2 + j * i2) % 2;
        (((i + i2) % nx) * ny + (j + j2) % ny) * 2 + c
    };
    GroupTable::from_rule(order, &[2 * ny, 2], rule)
}

fn janko(n: u32, m: u32, i: u32, x_sq: u8, a_pow: u8) -> Result<GroupTable, GroupError> {
    let nv = 1u64 << n;
    let na = 1u64 << m;
    let half = nv / 2;
    let order = (nv * 2 * na) as usize;
    let r = (nv - 1 + (1u64 << i)) % nv;
    let mut rpow = vec![1u64; na as usize];
    // a^g x a^-g = v^(c_g) x
    let mut c = vec![0u64; na as usize];
    for g in 1..na as usize {
        rpow[g] = rpow[g - 1] * r % nv;
        c[g] = (r * c[g - 1] + 1) % nv;
    }
    let split = |p: usize| {
        let p = p as u64;
        (p / (2 * na), p / na % 2, p % na)
    };
    let rule = |p: usize, q: usize| {
        let (e, f, g) = split(p);
        let (e2, f2, g2) = split(q);
        let moved = (e2 * rpow[g as usize] + f2 * c[g as usize]) % nv;
        let mut ee = if f == 1 { e + nv - moved } else { e + moved };
        if f + f2 >= 2 && x_sq == 1 {
            ee += half;
        }
        if g + g2 >= na && a_pow == 1 {
            ee += half;
        }
        let ff = (f + f2) % 2;
        let gg = (g + g2) % na;
        ((ee % nv) * 2 * na + ff * na + gg) as usize
    };
    let gens = [2 * na as usize, na as usize, 1];
    GroupTable::from_rule(order, &gens, rule)
}

/// Central product identifying the least central involution of `g` with
/// the least central involution of `h`.
pub fn central_over_involution(g: &GroupTable, h: &GroupTable) -> Result<GroupTable, GroupError> {
    let zg = product::central_involution(g).ok_or(GroupError::NotCentral)?;
    let zh = product::central_involution(h).ok_or(GroupError::NotCentral)?;
    let sg = g.generated([zg]);
    let sh = h.generated([zh]);
    product::central(g, h, &sg, &sh, &[(g.identity(), h.identity()), (zg, zh)])
}

/// Every family spec in the classification's parameter ranges whose order
/// is `2^big_n`, tagged with its case number.
pub fn classification_specs(big_n: u32) -> Vec<(u8, FamilySpec)> {
    let mut out = Vec::new();
    if big_n % 2 == 0 && big_n >= 2 {
        out.push((2, FamilySpec::Homocyclic { n: big_n / 2 }));
    }
    if big_n >= 3 {
        out.push((3, FamilySpec::Dihedral { n: big_n }));
    }
    if big_n == 3 {
        out.push((4, FamilySpec::Quaternion { n: 3 }));
    }
    if big_n >= 4 {
        out.push((5, FamilySpec::Quaternion { n: big_n }));
        out.push((6, FamilySpec::Semidihedral { n: big_n }));
    }
    if big_n % 2 == 1 && big_n >= 5 {
        out.push((7, FamilySpec::Wreath { n: (big_n - 1) / 2 }));
    }
    if big_n >= 4 {
        out.push((8, FamilySpec::MinNonabelian { r: big_n - 2, s: 1 }));
    }
    for (case, x_sq, a_pow) in [(9u8, 0u8, 1u8), (10, 0, 0), (11, 1, 1), (12, 1, 0), (13, 1, 0), (14, 1, 1)] {
        for n in 2..big_n {
            let Some(m) = (big_n - 1).checked_sub(n) else {
                continue;
            };
            if m < 1 {
                continue;
            }
            let fixed_i = matches!(case, 9 | 11 | 13);
            if fixed_i {
                if n > m && m > 1 {
                    out.push((case, FamilySpec::Janko { n, m, i: n - m + 1, x_sq, a_pow }));
                }
            } else if m >= 2 {
                let lo = 2.max((n + 2).saturating_sub(m));
                for i in lo..=n {
                    if case == 14 && m == n && i == n {
                        continue;
                    }
                    out.push((case, FamilySpec::Janko { n, m, i, x_sq, a_pow }));
                }
            }
        }
    }
    out
}

/// Number of fusion systems attached to a classification case.
pub fn case_fs_count(case: u8, spec: &FamilySpec) -> u32 {
    match (case, spec) {
        (3, _) | (5, _) => 2,
        (6, _) | (7, _) => 3,
        (10, FamilySpec::Janko { n, i, .. }) if i == n => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn involutions(g: &GroupTable) -> usize {
        g.elements().filter(|&x| g.elem_order(x) == 2).count()
    }

    #[test]
    fn small_families() {
        let d8 = FamilySpec::Dihedral { n: 3 }.build().unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(involutions(&d8), 5);
        let q8 = FamilySpec::Quaternion { n: 3 }.build().unwrap();
        assert_eq!(involutions(&q8), 1);
        let sd = FamilySpec::Semidihedral { n: 4 }.build().unwrap();
        assert_eq!(involutions(&sd), 5);
    }

    #[test]
    fn janko_smallest() {
        let g = FamilySpec::Janko { n: 2, m: 2, i: 2, x_sq: 0, a_pow: 0 }.build().unwrap();
        assert_eq!(g.order(), 32);
        g.check_associative_full().unwrap();
    }

    #[test]
    fn janko_rejects_bad_i() {
        let bad = FamilySpec::Janko { n: 3, m: 1, i: 2, x_sq: 0, a_pow: 0 };
        assert!(bad.build().is_err());
        let bad = FamilySpec::Janko { n: 2, m: 2, i: 1, x_sq: 0, a_pow: 0 };
        assert!(bad.build().is_err());
    }

    #[test]
    fn orders_match_closed_form() {
        for n in 2..=6 {
            for spec in classification_specs(n) {
                let g = spec.1.build().unwrap();
                assert_eq!(g.order(), 1 << n, "{}", spec.1);
            }
        }
    }

    #[test]
    fn serde_tag() {
        let s = FamilySpec::MinNonabelian { r: 2, s: 1 };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"family":"min_nonabelian","r":2,"s":1}"#);
        let back: FamilySpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
