use std::fmt;
use std::str::FromStr;

use super::{FiniteGroup, GroupError, GroupSpec, DEFAULT_CLOSURE_LIMIT};

/// Named groups with a documented element ordering.
///
/// * `Cyclic(n)`: element `i` is `g^i`.
/// * `Dihedral(n)`: the order-`2n` symmetry group of an `n`-gon; element
///   `i + n*j` is `r^i s^j` with `s r s = r^-1`.
/// * `Quaternion8`: elements `1, -1, i, -i, j, -j, k, -k` in that order.
/// * `Symmetric(n)`: permutations of `0..n` in lexicographic order of their
///   one-line notation, multiplied as `(a*b)(x) = a(b(x))`.
/// * `SemidirectCyclic { m, k, r }`: `<x, y | x^m = y^k = 1, x y = y x^r>`;
///   element `a + m*b` is `y^b x^a`, so `x` is element 1 and `y` is element `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Cyclic(u32),
    Dihedral(u32),
    Quaternion8,
    Symmetric(u32),
    SemidirectCyclic { m: u32, k: u32, r: u32 },
}

impl Builtin {
    /// Every built-in of order at most 24 exercised by the property suites.
    pub fn catalog() -> Vec<Builtin> {
        use Builtin::*;
        let mut v: Vec<Builtin> = (1..=9).map(Cyclic).collect();
        v.push(Cyclic(12));
        v.extend([Dihedral(2), Dihedral(4), Dihedral(5), Dihedral(6)]);
        v.extend([Quaternion8, Symmetric(3), Symmetric(4)]);
        v.extend([
            SemidirectCyclic { m: 3, k: 4, r: 2 },
            SemidirectCyclic { m: 5, k: 4, r: 2 },
            SemidirectCyclic { m: 7, k: 3, r: 2 },
        ]);
        v
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Cyclic(_) => "cyclic",
            Builtin::Dihedral(_) => "dihedral",
            Builtin::Quaternion8 => "quaternion8",
            Builtin::Symmetric(_) => "symmetric",
            Builtin::SemidirectCyclic { .. } => "semidirect_cyclic",
        }
    }

    pub fn params(&self) -> Vec<u32> {
        match *self {
            Builtin::Cyclic(n) | Builtin::Dihedral(n) | Builtin::Symmetric(n) => vec![n],
            Builtin::Quaternion8 => vec![],
            Builtin::SemidirectCyclic { m, k, r } => vec![m, k, r],
        }
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec::Builtin {
            name: self.name().to_string(),
            params: self.params(),
        }
    }

    pub fn from_parts(name: &str, params: &[u32]) -> Result<Builtin, GroupError> {
        let bad = |reason: &str| GroupError::BadParams {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        let one = || match params {
            [n] if *n >= 1 => Ok(*n),
            _ => Err(bad("expected one positive parameter")),
        };
        match name {
            "cyclic" => Ok(Builtin::Cyclic(one()?)),
            "dihedral" => Ok(Builtin::Dihedral(one()?)),
            "symmetric" => {
                let n = one()?;
                if n > 5 {
                    return Err(bad("symmetric groups are supported up to degree 5"));
                }
                Ok(Builtin::Symmetric(n))
            }
            "quaternion8" | "quaternion" | "q8" if params.is_empty() || params == [8] => {
                Ok(Builtin::Quaternion8)
            }
            "semidirect_cyclic" => match params {
                [m, k, r] if *m >= 1 && *k >= 1 => Ok(Builtin::SemidirectCyclic {
                    m: *m,
                    k: *k,
                    r: *r,
                }),
                _ => Err(bad("expected parameters m, k, r")),
            },
            _ => Err(GroupError::UnknownBuiltin(name.to_string())),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        let spec = self.spec();
        match *self {
            Builtin::Cyclic(n) => {
                let n = n as usize;
                let mult = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
                Ok(FiniteGroup::assemble(n, mult, spec))
            }
            Builtin::Dihedral(n) => {
                let n = n as usize;
                let size = 2 * n;
                let mut mult = vec![0u32; size * size];
                for x in 0..size {
                    let (a, b) = (x % n, x / n);
                    for y in 0..size {
                        let (c, d) = (y % n, y / n);
                        let rot = if b == 0 { a + c } else { a + n - c } % n;
                        mult[x * size + y] = (rot + n * ((b + d) % 2)) as u32;
                    }
                }
                Ok(FiniteGroup::assemble(size, mult, spec))
            }
            Builtin::Quaternion8 => {
                // unit products: (sign, unit) for units 1, i, j, k
                const UNIT: [[(u8, u8); 4]; 4] = [
                    [(0, 0), (0, 1), (0, 2), (0, 3)],
                    [(0, 1), (1, 0), (0, 3), (1, 2)],
                    [(0, 2), (1, 3), (1, 0), (0, 1)],
                    [(0, 3), (0, 2), (1, 1), (1, 0)],
                ];
                let mut mult = vec![0u32; 64];
                for x in 0..8usize {
                    for y in 0..8usize {
                        let (s, u) = UNIT[x / 2][y / 2];
                        let sign = (x % 2) ^ (y % 2) ^ s as usize;
                        mult[x * 8 + y] = (2 * u as usize + sign) as u32;
                    }
                }
                Ok(FiniteGroup::assemble(8, mult, spec))
            }
            Builtin::Symmetric(n) => {
                let perms = lex_permutations(n as usize);
                let size = perms.len();
                let index: std::collections::HashMap<&[usize], usize> =
                    perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
                let mut mult = vec![0u32; size * size];
                for (a, pa) in perms.iter().enumerate() {
                    for (b, pb) in perms.iter().enumerate() {
                        let prod: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                        mult[a * size + b] = index[prod.as_slice()] as u32;
                    }
                }
                Ok(FiniteGroup::assemble(size, mult, spec))
            }
            Builtin::SemidirectCyclic { m, k, r } => {
                let (mm, kk) = (m as u64, k as u64);
                let rr = r as u64 % mm.max(1);
                let pow_mod = |e: u64| (0..e).fold(1 % mm, |acc, _| acc * rr % mm);
                if mm > 1 && (pow_mod(kk) != 1 || (r as u64).is_multiple_of(mm)) {
                    return Err(GroupError::InvalidAction { m, k, r });
                }
                let size = (mm * kk) as usize;
                if size > DEFAULT_CLOSURE_LIMIT {
                    return Err(GroupError::SizeLimit {
                        limit: DEFAULT_CLOSURE_LIMIT,
                    });
                }
                let rpow: Vec<u64> = (0..kk).map(pow_mod).collect();
                let mut mult = vec![0u32; size * size];
                // (y^b x^a)(y^d x^c) = y^(b+d) x^(a r^d + c)
                for x in 0..size {
                    let (a, b) = (x as u64 % mm, x as u64 / mm);
                    for y in 0..size {
                        let (c, d) = (y as u64 % mm, y as u64 / mm);
                        let na = (a * rpow[d as usize] + c) % mm;
                        let nb = (b + d) % kk;
                        mult[x * size + y] = (na + mm * nb) as u32;
                    }
                }
                Ok(FiniteGroup::assemble(size, mult, spec))
            }
        }
    }
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Quaternion8 => f.write_str("quaternion8"),
            b => {
                let ps: Vec<String> = b.params().iter().map(u32::to_string).collect();
                write!(f, "{}({})", b.name(), ps.join(","))
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = GroupError;

    /// Accepts `cyclic(5)`, `cyclic5`, `symmetric3`, `quaternion8`, `q8`,
    /// `semidirect_cyclic(7,3,2)` and `semidirect_cyclic_7_3_2`.
    fn from_str(s: &str) -> Result<Builtin, GroupError> {
        let s = s.trim();
        let unknown = || GroupError::UnknownBuiltin(s.to_string());
        if matches!(s, "quaternion8" | "q8" | "Q8") {
            return Ok(Builtin::Quaternion8);
        }
        let parse_list = |body: &str, sep: char| -> Result<Vec<u32>, GroupError> {
            body.split(sep)
                .map(|p| p.trim().parse::<u32>().map_err(|_| unknown()))
                .collect()
        };
        if let Some(open) = s.find('(') {
            let body = s[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
            return Builtin::from_parts(&s[..open], &parse_list(body, ',')?);
        }
        if let Some(rest) = s.strip_prefix("semidirect_cyclic_") {
            return Builtin::from_parts("semidirect_cyclic", &parse_list(rest, '_')?);
        }
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
        let (name, digits) = s.split_at(split);
        let n: u32 = digits.parse().map_err(|_| unknown())?;
        Builtin::from_parts(name, &[n])
    }
}
