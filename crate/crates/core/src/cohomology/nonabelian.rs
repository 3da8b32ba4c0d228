use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{resource, Result};
use crate::perm::FiniteGroup;
use crate::rack::RackTable;

/// One equivalence class of 2-cocycles `f: X² → A`, stored as the table
/// `f[x * |X| + y]` of group element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleClass {
    /// Lexicographically least member.
    pub representative: Vec<usize>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonabelianH2 {
    pub group: String,
    pub cocycle_count: usize,
    pub classes: Vec<CocycleClass>,
}

impl NonabelianH2 {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// `|A|^e`, or `None` on overflow.
fn checked_power(a: usize, e: usize) -> Option<u64> {
    (a as u64).checked_pow(u32::try_from(e).ok()?)
}

/// Enumerates every `f: X² → A` with
/// `f(x▷y, x▷z) f(x, z) = f(x, y▷z) f(y, z)` in lexicographic order, then
/// groups them under `f'(x, y) = γ(x▷y) f(x, y) γ(y)⁻¹` for `γ: X → A`.
pub fn nonabelian_h2(rack: &RackTable, group: &FiniteGroup, budget: &Budget) -> Result<NonabelianH2> {
    let (n, a) = (rack.size(), group.order());
    let cells = n * n;
    match checked_power(a, cells) {
        Some(total) if total <= budget.enumeration_cap => {}
        _ => {
            return resource(format!(
                "{a}^{cells} candidate functions exceed the enumeration cap {}; use a rack with at most 3 \
                 elements or a smaller group",
                budget.enumeration_cap
            ))
        }
    }

    // Each condition is tested as soon as the last cell it reads is set.
    let mut due: Vec<Vec<[usize; 4]>> = vec![Vec::new(); cells];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let cell = [
                    rack.op(x, y) * n + rack.op(x, z),
                    x * n + z,
                    x * n + rack.op(y, z),
                    y * n + z,
                ];
                due[*cell.iter().max().expect("four cells")].push(cell);
            }
        }
    }
    let holds = |f: &[usize], c: &[usize; 4]| group.mul(f[c[0]], f[c[1]]) == group.mul(f[c[2]], f[c[3]]);

    let mut cocycles: Vec<Vec<usize>> = Vec::new();
    let mut f = vec![0usize; cells];
    let mut pos = 0usize;
    // Depth-first over cells with values in increasing order; `f[pos]` is
    // the value being tried at the current depth.
    loop {
        if f[pos] < a && due[pos].iter().all(|c| holds(&f, c)) {
            if pos + 1 == cells {
                cocycles.push(f.clone());
                f[pos] += 1;
            } else {
                pos += 1;
                f[pos] = 0;
            }
            continue;
        }
        if f[pos] < a {
            f[pos] += 1;
            continue;
        }
        if pos == 0 {
            break;
        }
        pos -= 1;
        f[pos] += 1;
    }

    let index: HashMap<&[usize], usize> = cocycles.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut class_of = vec![usize::MAX; cocycles.len()];
    let mut classes = Vec::new();
    let gammas = checked_power(a, n).expect("fits, since a^(n^2) does") as usize;
    for i in 0..cocycles.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut members = BTreeSet::new();
        for code in 0..gammas {
            let gamma: Vec<usize> = (0..n).map(|x| code / a.pow(x as u32) % a).collect();
            let moved: Vec<usize> = (0..cells)
                .map(|c| {
                    let (x, y) = (c / n, c % n);
                    group.mul(group.mul(gamma[rack.op(x, y)], cocycles[i][c]), group.inv(gamma[y]))
                })
                .collect();
            let j = *index
                .get(moved.as_slice())
                .expect("equivalence preserves the cocycle condition");
            members.insert(j);
        }
        for &j in &members {
            class_of[j] = classes.len();
        }
        classes.push(CocycleClass {
            representative: cocycles[i].clone(),
            size: members.len(),
        });
    }
    Ok(NonabelianH2 {
        group: group.name().to_string(),
        cocycle_count: cocycles.len(),
        classes,
    })
}
