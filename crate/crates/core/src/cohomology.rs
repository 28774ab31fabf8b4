//! Normalized 2-cocycles with values in `C_2` and the central extensions
//! they define.

use thiserror::Error;

use crate::gf2::{BitVec, Echelon};
use crate::group::{GroupError, GroupTable, MAX_ORDER};
use crate::morphisms::minimal_generators;

pub const DEFAULT_H2_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("H^2 has dimension {dim}, above the cap {cap}")]
    H2TooLarge { dim: usize, cap: usize },
    #[error("extension of order {0} is too large")]
    TooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Cocycles are stored on the normalized variables `f(a, b)` with
/// `a, b != 1`; use [`CocycleBasis::value`] to read them.
#[derive(Debug, Clone)]
pub struct CocycleBasis {
    order: usize,
    identity: usize,
    pub z2_basis: Vec<BitVec>,
    pub b2_basis: Vec<BitVec>,
    /// Cocycles whose classes form a basis of `H^2`.
    pub h2_basis: Vec<BitVec>,
    pub h2_dim: usize,
}

struct Vars {
    order: usize,
    identity: usize,
}

impl Vars {
    fn pos(&self, a: usize) -> usize {
        if a < self.identity {
            a
        } else {
            a - 1
        }
    }

    fn var(&self, a: usize, b: usize) -> Option<usize> {
        (a != self.identity && b != self.identity).then(|| self.pos(a) * (self.order - 1) + self.pos(b))
    }

    fn count(&self) -> usize {
        (self.order - 1) * (self.order - 1)
    }
}

impl CocycleBasis {
    pub fn value(&self, f: &BitVec, a: usize, b: usize) -> u8 {
        let v = Vars {
            order: self.order,
            identity: self.identity,
        };
        v.var(a, b).map_or(0, |k| f.get(k) as u8)
    }

    /// Cocycle `sum_k bit_k(mask) * h2_basis[k]`.
    pub fn combination(&self, mask: u64) -> BitVec {
        let len = (self.order - 1) * (self.order - 1);
        let mut f = BitVec::zeros(len);
        for (k, b) in self.h2_basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                f.xor_assign(b);
            }
        }
        f
    }

    /// Checks the cocycle identity on all triples.
    pub fn is_cocycle(&self, g: &GroupTable, f: &BitVec) -> bool {
        g.elements().all(|a| {
            g.elements().all(|b| {
                g.elements().all(|c| {
                    self.value(f, a, b) ^ self.value(f, g.mul(a, b), c)
                        == self.value(f, b, c) ^ self.value(f, a, g.mul(b, c))
                })
            })
        })
    }
}

/// Solves for normalized cocycles. The cocycle identity is imposed only for
/// `c` in a generating set: it says exactly that the extension product is
/// associative with right factor `(c, 0)`, and associativity for a generating
/// set of right factors gives it everywhere.
pub fn cocycle_space(g: &GroupTable) -> CocycleBasis {
    let vars = Vars {
        order: g.order(),
        identity: g.identity(),
    };
    let nvars = vars.count();
    let gens = minimal_generators(g);
    let mut ech = Echelon::new(nvars);
    for a in g.elements() {
        for b in g.elements() {
            for &c in &gens {
                let mut v = BitVec::zeros(nvars);
                for (x, y) in [(a, b), (g.mul(a, b), c), (b, c), (a, g.mul(b, c))] {
                    if let Some(k) = vars.var(x, y) {
                        v.flip(k);
                    }
                }
                if !v.is_zero() {
                    ech.insert(v);
                }
            }
        }
    }
    let z2_basis = ech.nullspace();

    let mut b2 = Echelon::new(nvars);
    let mut b2_basis = Vec::new();
    for h in g.elements().filter(|&h| h != g.identity()) {
        let mut v = BitVec::zeros(nvars);
        for a in g.elements() {
            for b in g.elements() {
                let hits = (a == h) as u8 + (b == h) as u8 + (g.mul(a, b) == h) as u8;
                if hits % 2 == 1 {
                    if let Some(k) = vars.var(a, b) {
                        v.flip(k);
                    }
                }
            }
        }
        if b2.insert(v.clone()) {
            b2_basis.push(v);
        }
    }
    let mut h2_basis = Vec::new();
    for z in &z2_basis {
        if b2.insert(z.clone()) {
            h2_basis.push(z.clone());
        }
    }
    CocycleBasis {
        order: g.order(),
        identity: g.identity(),
        h2_dim: h2_basis.len(),
        z2_basis,
        b2_basis,
        h2_basis,
    }
}

/// The extension `(a, s)(b, t) = (ab, s + t + f(a, b))`, element `(a, s)` at
/// index `2a + s`.
pub fn extension(g: &GroupTable, basis: &CocycleBasis, f: &BitVec) -> Result<GroupTable, CohomologyError> {
    let order = 2 * g.order();
    if order > MAX_ORDER {
        return Err(CohomologyError::TooLarge(order));
    }
    let rule = |p: usize, q: usize| {
        let (a, s) = (p / 2, p % 2);
        let (b, t) = (q / 2, q % 2);
        2 * g.mul(a, b) + ((s as u8 ^ t as u8 ^ basis.value(f, a, b)) as usize)
    };
    let mut gens: Vec<usize> = minimal_generators(g).iter().map(|&x| 2 * x).collect();
    gens.push(2 * g.identity() + 1);
    Ok(GroupTable::from_rule(order, &gens, rule)?)
}

/// One extension per class of `H^2(G, C_2)`, classes in increasing order of
/// their coordinate bitmask.
pub fn central_extensions(g: &GroupTable, cap: usize) -> Result<Vec<GroupTable>, CohomologyError> {
    let basis = cocycle_space(g);
    if basis.h2_dim > cap {
        return Err(CohomologyError::H2TooLarge {
            dim: basis.h2_dim,
            cap,
        });
    }
    (0..1u64 << basis.h2_dim)
        .map(|mask| extension(g, &basis, &basis.combination(mask)))
        .collect()
}
