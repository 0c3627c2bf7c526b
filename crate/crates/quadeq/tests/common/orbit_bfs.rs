//! Brute-force orbit closure inside a finite box.

use std::collections::{HashMap, VecDeque};

use quadeq::fgword::Sign;
use quadeq::orbits::ActionSpec;
use quadeq::surface::PiElement;

pub struct BoxOrbits {
    comp: HashMap<(i64, i64), usize>,
}

impl BoxOrbits {
    /// Connected components of the Schreier graph restricted to
    /// `|r|, |s| ≤ radius`.
    pub fn new(action: &ActionSpec, radius: i64) -> Self {
        let eps = action.epsilon();
        let mut comp = HashMap::new();
        let mut next = 0;
        for r in -radius..=radius {
            for s in -radius..=radius {
                if comp.contains_key(&(r, s)) {
                    continue;
                }
                comp.insert((r, s), next);
                let mut queue = VecDeque::from([PiElement::new(eps, r, s)]);
                while let Some(g) = queue.pop_front() {
                    for (h, _) in action.neighbours(&g) {
                        if h.r.abs() > radius || h.s.abs() > radius {
                            continue;
                        }
                        if let std::collections::hash_map::Entry::Vacant(e) = comp.entry((h.r, h.s)) {
                            e.insert(next);
                            queue.push_back(h);
                        }
                    }
                }
                next += 1;
            }
        }
        BoxOrbits { comp }
    }

    pub fn same(&self, g: &PiElement, h: &PiElement) -> bool {
        self.comp[&(g.r, g.s)] == self.comp[&(h.r, h.s)]
    }
}

/// Character values reached from `base` by BFS inside the box; `None` when
/// two paths disagree (a stabilizer element with character −1).
pub fn bfs_signs(action: &ActionSpec, base: &PiElement, radius: i64) -> Option<HashMap<(i64, i64), Sign>> {
    let mut seen = HashMap::from([((base.r, base.s), Sign::Plus)]);
    let mut queue = VecDeque::from([(*base, Sign::Plus)]);
    let mut consistent = true;
    while let Some((g, sg)) = queue.pop_front() {
        for (h, chi) in action.neighbours(&g) {
            if h.r.abs() > radius || h.s.abs() > radius {
                continue;
            }
            let sh = sg * chi;
            match seen.get(&(h.r, h.s)) {
                Some(&old) => {
                    if old != sh {
                        consistent = false;
                    }
                }
                None => {
                    seen.insert((h.r, h.s), sh);
                    queue.push_back((h, sh));
                }
            }
        }
    }
    consistent.then_some(seen)
}

/// Ten or more parameter choices for each action kind.
pub fn parameterizations() -> Vec<ActionSpec> {
    let mut out = Vec::new();
    for (m, n) in [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 2), (3, 0), (2, -1), (1, 3), (0, 2), (-2, -3)] {
        out.push(ActionSpec::HatAbs { u: PiElement::new(Sign::Plus, m, n) });
    }
    for (m, n) in [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 2), (3, 0), (2, -1), (1, -1), (0, 2), (-2, 1)] {
        out.push(ActionSpec::HatAbs { u: PiElement::new(Sign::Minus, m, 2 * n) });
    }
    for n in [1, 2, 3, 4, 5, 6, -1, -2, -3, -6] {
        out.push(ActionSpec::Tilde { n });
    }
    for (n, l) in [(1, 0), (1, 1), (2, -1), (3, 2), (-3, 1), (4, 0), (6, -2), (5, 3), (-2, 2), (9, -1)] {
        out.push(ActionSpec::TildeL { n, l });
    }
    for (n, l) in [(1, 0), (1, 1), (2, -1), (3, 2), (-3, 1), (4, 0), (6, -2), (5, 3), (-2, 2), (9, -1), (12, 1)] {
        out.push(ActionSpec::HatL { n, l });
    }
    out
}
