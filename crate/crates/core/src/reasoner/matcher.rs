//! Backtracking CQ evaluation over a chased structure.

use super::engine::{IAtom, ICq, ITerm, Structure, TOP};

pub(crate) fn matches(s: &Structure, q: &ICq) -> bool {
    // Constants outside the domain cannot be matched.
    for a in &q.atoms {
        let ts: &[ITerm] = match a {
            IAtom::Concept(_, t) => std::slice::from_ref(t),
            IAtom::Role(_, t1, t2) => &[*t1, *t2],
        };
        for t in ts {
            if let ITerm::Const(c) = t {
                if !s.present[*c as usize] {
                    return false;
                }
            }
        }
    }
    let mut assign = vec![u32::MAX; q.nvars];
    let mut done = vec![false; q.atoms.len()];
    solve(s, q, &mut assign, &mut done, q.atoms.len())
}

fn value(t: ITerm, assign: &[u32]) -> Option<u32> {
    match t {
        ITerm::Const(c) => Some(c),
        ITerm::Var(v) => {
            let x = assign[v as usize];
            (x != u32::MAX).then_some(x)
        }
    }
}

fn bound_count(a: &IAtom, assign: &[u32]) -> usize {
    match *a {
        IAtom::Concept(_, t) => value(t, assign).is_some() as usize * 2,
        IAtom::Role(_, t1, t2) => {
            value(t1, assign).is_some() as usize + value(t2, assign).is_some() as usize
        }
    }
}

/// Binds `t` to `e`; returns the variable newly bound, or `Err` on a clash.
fn bind(t: ITerm, e: u32, assign: &mut [u32]) -> Result<Option<u32>, ()> {
    match t {
        ITerm::Const(c) => {
            if c == e {
                Ok(None)
            } else {
                Err(())
            }
        }
        ITerm::Var(v) => {
            let slot = &mut assign[v as usize];
            if *slot == u32::MAX {
                *slot = e;
                Ok(Some(v))
            } else if *slot == e {
                Ok(None)
            } else {
                Err(())
            }
        }
    }
}

fn try_pair(
    s: &Structure,
    q: &ICq,
    assign: &mut Vec<u32>,
    done: &mut Vec<bool>,
    left: usize,
    (t1, t2): (ITerm, ITerm),
    (x, y): (u32, u32),
) -> bool {
    let Ok(b1) = bind(t1, x, assign) else { return false };
    let ok = match bind(t2, y, assign) {
        Ok(b2) => {
            let r = solve(s, q, assign, done, left);
            if let Some(v) = b2 {
                assign[v as usize] = u32::MAX;
            }
            r
        }
        Err(()) => false,
    };
    if let Some(v) = b1 {
        assign[v as usize] = u32::MAX;
    }
    ok
}

fn solve(s: &Structure, q: &ICq, assign: &mut Vec<u32>, done: &mut Vec<bool>, left: usize) -> bool {
    if left == 0 {
        return true;
    }
    let Some(i) = (0..q.atoms.len())
        .filter(|&i| !done[i])
        .max_by_key(|&i| (bound_count(&q.atoms[i], assign), std::cmp::Reverse(i)))
    else {
        return true;
    };
    done[i] = true;
    let found = match q.atoms[i] {
        IAtom::Concept(c, t) => match value(t, assign) {
            Some(e) => s.has(e, c) && solve(s, q, assign, done, left - 1),
            None => {
                let ITerm::Var(v) = t else { unreachable!() };
                let mut hit = false;
                for e in 0..s.len() as u32 {
                    if s.present[e as usize] && s.has(e, TOP) && s.has(e, c) {
                        assign[v as usize] = e;
                        if solve(s, q, assign, done, left - 1) {
                            hit = true;
                            break;
                        }
                    }
                }
                assign[v as usize] = u32::MAX;
                hit
            }
        },
        IAtom::Role(r, t1, t2) => match (value(t1, assign), value(t2, assign)) {
            (Some(x), Some(y)) => s.has_edge(x, r, y) && solve(s, q, assign, done, left - 1),
            (Some(x), None) => {
                let succ: Vec<u32> = s.out[x as usize].iter().filter(|(n, _)| *n == r).map(|&(_, y)| y).collect();
                succ.into_iter().any(|y| try_pair(s, q, assign, done, left - 1, (t1, t2), (x, y)))
            }
            (None, Some(y)) => {
                let pred: Vec<u32> = s.inn[y as usize].iter().filter(|(n, _)| *n == r).map(|&(_, x)| x).collect();
                pred.into_iter().any(|x| try_pair(s, q, assign, done, left - 1, (t1, t2), (x, y)))
            }
            (None, None) => {
                let mut pairs: Vec<(u32, u32)> = s.edge_list().filter(|e| e.1 == r).map(|&(x, _, y)| (x, y)).collect();
                pairs.sort_unstable();
                pairs.into_iter().any(|p| try_pair(s, q, assign, done, left - 1, (t1, t2), p))
            }
        },
    };
    done[i] = false;
    found
}
