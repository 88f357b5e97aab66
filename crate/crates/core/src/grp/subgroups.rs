use std::collections::HashSet;

use num_integer::Integer;

use super::{FiniteGroup, GroupError, DEFAULT_SUBGROUP_LIMIT};

/// A subgroup given by its sorted element set. Values of this type are
/// always closed under multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<u32>,
    generators: Vec<u32>,
}

impl Subgroup {
    /// Validates an explicit element subset.
    pub fn from_elements(g: &FiniteGroup, elements: &[u32]) -> Result<Subgroup, GroupError> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if let Some(&bad) = els.iter().find(|&&x| x as usize >= g.order()) {
            return Err(GroupError::BadElement(bad as usize));
        }
        let mut member = vec![false; g.order()];
        for &x in &els {
            member[x as usize] = true;
        }
        let closed = els
            .iter()
            .all(|&a| els.iter().all(|&b| member[g.mul(a, b) as usize]));
        if els.is_empty() || !member[0] || !closed {
            return Err(GroupError::NotSubgroup);
        }
        Ok(Subgroup {
            generators: els.clone(),
            elements: els,
        })
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &FiniteGroup, gens: &[u32]) -> Subgroup {
        let mut member = vec![false; g.order()];
        member[0] = true;
        let mut elements = vec![0u32];
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier];
            frontier += 1;
            for &s in gens {
                let y = g.mul(x, s);
                if !member[y as usize] {
                    member[y as usize] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        Subgroup {
            elements,
            generators: gens.to_vec(),
        }
    }

    pub fn cyclic(g: &FiniteGroup, x: u32) -> Subgroup {
        Subgroup::generated(g, &[x])
    }

    pub fn trivial() -> Subgroup {
        Subgroup {
            elements: vec![0],
            generators: vec![],
        }
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup {
            elements: g.elements().collect(),
            generators: g.elements().collect(),
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_cyclic(&self, g: &FiniteGroup) -> bool {
        self.elements
            .iter()
            .any(|&x| g.element_order(x) as usize == self.order())
    }

    pub fn conjugate_by(&self, g: &FiniteGroup, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.elements.iter().map(|&h| g.conjugate(x, h)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_conjugate_to(&self, g: &FiniteGroup, other: &Subgroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        g.elements()
            .any(|x| self.elements.iter().all(|&h| other.contains(g.conjugate(x, h))))
    }

    /// `self` is contained in some conjugate of `other`.
    pub fn is_subconjugate_to(&self, g: &FiniteGroup, other: &Subgroup) -> bool {
        if !other.order().is_multiple_of(self.order()) {
            return false;
        }
        g.elements()
            .any(|x| self.elements.iter().all(|&h| other.contains(g.conjugate(x, h))))
    }
}

fn sort_reps(reps: &mut [Subgroup]) {
    reps.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
}

impl FiniteGroup {
    /// One representative per conjugacy class of cyclic subgroups. Classes
    /// of elements generating conjugate cyclic subgroups are exactly the
    /// orbits of the unit power maps on conjugacy classes.
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let cc = self.conjugacy_classes();
        let mut seen = vec![false; cc.len()];
        let mut reps = Vec::new();
        for c in 0..cc.len() {
            if seen[c] {
                continue;
            }
            let ord = cc.rep_order(c) as i64;
            for k in 1..=ord.max(1) {
                if k.gcd(&ord) == 1 {
                    seen[cc.power_of(c, k)] = true;
                }
            }
            reps.push(Subgroup::cyclic(self, cc.rep(c)));
        }
        sort_reps(&mut reps);
        reps
    }

    /// All subgroups up to conjugacy, with the default size bound.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        self.all_subgroups_bounded(DEFAULT_SUBGROUP_LIMIT)
    }

    /// Starts from the cyclic subgroups and repeatedly adjoins one element to
    /// each known class representative until no new class appears. Every
    /// subgroup is reached along a chain `<g1> < <g1,g2> < ...`, and
    /// conjugating such a chain keeps it inside the search, so the fixpoint
    /// meets every conjugacy class.
    pub fn all_subgroups_bounded(&self, limit: usize) -> Result<Vec<Subgroup>, GroupError> {
        if self.order() > limit {
            return Err(GroupError::SizeLimit { limit });
        }
        let mut reps = self.cyclic_subgroups();
        let mut seen: HashSet<Vec<u32>> = reps.iter().map(|s| s.elements.clone()).collect();
        let mut next = 0;
        while next < reps.len() {
            let base = reps[next].clone();
            next += 1;
            for x in self.elements() {
                if base.contains(x) {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(x);
                let cand = Subgroup::generated(self, &gens);
                if !seen.insert(cand.elements.clone()) {
                    continue;
                }
                if reps.iter().any(|r| r.is_conjugate_to(self, &cand)) {
                    continue;
                }
                reps.push(cand);
            }
        }
        sort_reps(&mut reps);
        Ok(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::Builtin;

    fn orders(v: &[Subgroup]) -> Vec<usize> {
        v.iter().map(Subgroup::order).collect()
    }

    #[test]
    fn cyclic_subgroup_examples() {
        let c4 = Builtin::Cyclic(4).build().unwrap();
        assert_eq!(orders(&c4.cyclic_subgroups()), vec![1, 2, 4]);
        let s3 = Builtin::Symmetric(3).build().unwrap();
        assert_eq!(orders(&s3.cyclic_subgroups()), vec![1, 2, 3]);
        let q8 = Builtin::Quaternion8.build().unwrap();
        assert_eq!(orders(&q8.cyclic_subgroups()), vec![1, 2, 4, 4, 4]);
        assert_eq!(q8.cyclic_subgroups()[1].elements(), &[0, 1]);
    }

    #[test]
    fn all_subgroup_counts() {
        let c2 = Builtin::Cyclic(2).build().unwrap();
        assert_eq!(orders(&c2.all_subgroups().unwrap()), vec![1, 2]);
        let s3 = Builtin::Symmetric(3).build().unwrap();
        assert_eq!(orders(&s3.all_subgroups().unwrap()), vec![1, 2, 3, 6]);
        let q8 = Builtin::Quaternion8.build().unwrap();
        assert_eq!(orders(&q8.all_subgroups().unwrap()), vec![1, 2, 4, 4, 4, 8]);
        let s4 = Builtin::Symmetric(4).build().unwrap();
        assert_eq!(s4.all_subgroups().unwrap().len(), 11);
        assert!(matches!(
            s4.all_subgroups_bounded(10),
            Err(GroupError::SizeLimit { limit: 10 })
        ));
    }

    #[test]
    fn from_elements_validation() {
        let s3 = Builtin::Symmetric(3).build().unwrap();
        assert!(Subgroup::from_elements(&s3, &[0]).is_ok());
        assert_eq!(Subgroup::from_elements(&s3, &[0, 1, 2]), Err(GroupError::NotSubgroup));
        assert_eq!(Subgroup::from_elements(&s3, &[1]), Err(GroupError::NotSubgroup));
        assert_eq!(Subgroup::from_elements(&s3, &[0, 99]), Err(GroupError::BadElement(99)));
    }
}
