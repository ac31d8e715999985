//! Products, unions, projections and self-composition.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::indexed_name;

use super::complement::is_weak;
use super::{Cube, Nba};

/// Intersection. Uses the two-copy construction unless one side is all-accepting or both are
/// weak; in those cases the synchronous product with conjoined acceptance is exact and keeps
/// weakness.
pub fn product(a: &Nba, b: &Nba) -> Result<Nba> {
    a.check_alphabet(&b.vars)?;
    let simple = a.all_accepting() || b.all_accepting() || (is_weak(a) && is_weak(b));
    let mut idx: HashMap<(usize, usize, u8), usize> = HashMap::new();
    let mut states = vec![(a.init, b.init, 0u8)];
    idx.insert(states[0], 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (p, q, flag) = states[i];
        let nflag = if simple {
            0
        } else if flag == 0 {
            u8::from(a.acc[p])
        } else {
            u8::from(!b.acc[q])
        };
        let mut es = Vec::new();
        for (c1, t1) in &a.trans[p] {
            for (c2, t2) in &b.trans[q] {
                if let Some(c) = c1.and(c2) {
                    let key = (*t1, *t2, nflag);
                    let j = *idx.entry(key).or_insert_with(|| {
                        states.push(key);
                        states.len() - 1
                    });
                    es.push((c, j));
                }
            }
        }
        trans.push(es);
        i += 1;
    }
    let acc = states
        .iter()
        .map(|&(p, q, f)| if simple { a.acc[p] && b.acc[q] } else { f == 0 && a.acc[p] })
        .collect();
    Ok(Nba { vars: a.vars.clone(), init: 0, trans, acc }.trim())
}

/// Union via a fresh initial state.
pub fn union(a: &Nba, b: &Nba) -> Result<Nba> {
    a.check_alphabet(&b.vars)?;
    let na = a.num_states();
    let mut trans: Vec<Vec<(Cube, usize)>> = Vec::with_capacity(na + b.num_states() + 1);
    let mut init_edges: Vec<(Cube, usize)> = a.trans[a.init].iter().map(|&(c, t)| (c, t + 1)).collect();
    init_edges.extend(b.trans[b.init].iter().map(|&(c, t)| (c, t + 1 + na)));
    trans.push(init_edges);
    trans.extend(a.trans.iter().map(|es| es.iter().map(|&(c, t)| (c, t + 1)).collect()));
    trans.extend(b.trans.iter().map(|es| es.iter().map(|&(c, t)| (c, t + 1 + na)).collect()));
    let mut acc = vec![false];
    acc.extend(a.acc.iter().copied());
    acc.extend(b.acc.iter().copied());
    Ok(Nba { vars: a.vars.clone(), init: 0, trans, acc }.trim())
}

/// Existential projection: erases `vars` from the alphabet.
pub fn exists_project(a: &Nba, vars: &BTreeSet<String>) -> Result<Nba> {
    for v in vars {
        if !a.vars.contains(v) {
            return Err(Error::AlphabetMismatch(format!("cannot project unknown variable `{v}`")));
        }
    }
    let mut mask = 0u64;
    let mut map = Vec::new();
    let mut kept = Vec::new();
    for (i, v) in a.vars.iter().enumerate() {
        if vars.contains(v) {
            mask |= 1 << i;
            map.push(None);
        } else {
            map.push(Some(kept.len()));
            kept.push(v.clone());
        }
    }
    let trans = a
        .trans
        .iter()
        .map(|es| {
            let mut v: Vec<(Cube, usize)> = es.iter().map(|(c, t)| (c.erase(mask).remap(&map), *t)).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    Ok(Nba { vars: kept, init: a.init, trans, acc: a.acc.clone() }.trim())
}

/// Pair alphabet of a self-composition: all `v[0]`, then all `v[1]`.
pub fn pair_vars(vars: &[String]) -> Vec<String> {
    let mut out: Vec<String> = vars.iter().map(|v| indexed_name(v, 0)).collect();
    out.extend(vars.iter().map(|v| indexed_name(v, 1)));
    out
}

/// Self-composition over the pair alphabet; both components must agree on `equal_on`.
pub fn self_compose(a: &Nba, equal_on: &BTreeSet<String>) -> Result<Nba> {
    pair_product(a, a, equal_on)
}

/// Pairs of words `(u, v)` with `u ∈ L(a)`, `v ∈ L(b)` agreeing on `equal_on` at every position.
pub fn pair_product(a: &Nba, b: &Nba, equal_on: &BTreeSet<String>) -> Result<Nba> {
    a.check_alphabet(&b.vars)?;
    let k = a.vars.len();
    if 2 * k > 64 {
        return Err(Error::AlphabetMismatch("pair alphabet exceeds 64 variables".into()));
    }
    let mut eq_bits = Vec::new();
    for v in equal_on {
        let i = a
            .vars
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| Error::AlphabetMismatch(format!("`{v}` not in alphabet")))?;
        eq_bits.push(i);
    }
    let pv = pair_vars(&a.vars);
    let left = Nba {
        vars: pv.clone(),
        init: a.init,
        trans: a.trans.clone(),
        acc: a.acc.clone(),
    };
    let shift = |c: &Cube| Cube { pos: c.pos << k, neg: c.neg << k };
    let right = Nba {
        vars: pv.clone(),
        init: b.init,
        trans: b.trans.iter().map(|es| es.iter().map(|(c, t)| (shift(c), *t)).collect()).collect(),
        acc: b.acc.clone(),
    };
    let prod = product(&left, &right)?;
    let trans = prod
        .trans
        .iter()
        .map(|es| {
            let mut out = Vec::new();
            for &(c, t) in es {
                for c2 in enforce_equal(c, &eq_bits, k) {
                    out.push((c2, t));
                }
            }
            out
        })
        .collect();
    Ok(Nba { vars: pv, init: prod.init, trans, acc: prod.acc }.trim())
}

/// Restricts a pair-alphabet cube to letters where bit `i` equals bit `i + k` for each listed `i`.
pub fn enforce_equal(c: Cube, bits: &[usize], k: usize) -> Vec<Cube> {
    let mut cubes = vec![c];
    for &i in bits {
        let (l, r) = (i, i + k);
        let mut next = Vec::new();
        for c in cubes {
            let val = |b: usize| -> Option<bool> {
                if c.pos >> b & 1 == 1 {
                    Some(true)
                } else if c.neg >> b & 1 == 1 {
                    Some(false)
                } else {
                    None
                }
            };
            match (val(l), val(r)) {
                (Some(x), Some(y)) if x != y => {}
                (Some(x), _) | (_, Some(x)) => {
                    next.push(c.and(&Cube::lit(l, x)).and_then(|d| d.and(&Cube::lit(r, x))).expect("consistent"));
                }
                (None, None) => {
                    for x in [false, true] {
                        next.push(c.and(&Cube::lit(l, x)).and_then(|d| d.and(&Cube::lit(r, x))).expect("consistent"));
                    }
                }
            }
        }
        cubes = next;
    }
    cubes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{is_empty, lasso_member, ltl_to_nba, translate::ltl_to_nba_over};
    use crate::ltl::{eval_ltl, Ltl};
    use crate::model::LassoWord;

    fn v(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn product_and_union() {
        let vars = v(&["a", "b"]);
        let fa = ltl_to_nba_over(&Ltl::parse("F a").unwrap(), &vars);
        let gna = ltl_to_nba_over(&Ltl::parse("G !a").unwrap(), &vars);
        assert!(is_empty(&product(&fa, &gna).unwrap()).is_empty());
        let fb = ltl_to_nba_over(&Ltl::parse("F b").unwrap(), &vars);
        let p = product(&fa, &fb).unwrap();
        let u = union(&Nba::empty(vars.clone()), &fa).unwrap();
        let conj = Ltl::parse("F a & F b").unwrap();
        for w in LassoWord::enumerate(&vars, 2, 2) {
            assert_eq!(lasso_member(&p, &w).unwrap(), eval_ltl(&w, &conj).unwrap());
            assert_eq!(lasso_member(&u, &w).unwrap(), lasso_member(&fa, &w).unwrap());
        }
        assert!(lasso_member(&p, &LassoWord::parse(&["a", "b"], "{a} | {b}").unwrap()).unwrap());
    }

    #[test]
    fn projection() {
        let a = ltl_to_nba(&Ltl::parse("in & G out").unwrap());
        let p = exists_project(&a, &["out".to_string()].into()).unwrap();
        assert_eq!(p.vars, v(&["in"]));
        for w in LassoWord::enumerate(&p.vars, 2, 2) {
            assert_eq!(lasso_member(&p, &w).unwrap(), w.letter(0) & 1 == 1);
        }
        let g = ltl_to_nba(&Ltl::parse("G out").unwrap());
        let pg = exists_project(&g, &["out".to_string()].into()).unwrap();
        assert!(pg.vars.is_empty());
        assert!(!is_empty(&pg).is_empty());
    }

    #[test]
    fn self_composition_equal_on() {
        let g = ltl_to_nba(&Ltl::parse("G c").unwrap());
        let s = self_compose(&g, &["c".to_string()].into()).unwrap();
        for w in LassoWord::enumerate(&s.vars, 1, 2) {
            let all = (0..w.len()).all(|i| w.letter(i) == 3);
            assert_eq!(lasso_member(&s, &w).unwrap(), all);
        }
    }
}
