//! Random valid models.
//!
//! Every space is a partition of a small set of auxiliary points; its
//! states are the cells. A finer partition is a more expressive space and
//! projection maps a cell to the coarser cell containing it, so
//! projections commute by construction. The family of partitions is
//! closed under common refinement (sup) and contains the coarsest common
//! coarsening (bottom).
//!
//! Information is a partition `Q` of the points whose saturations in every
//! space are pairwise equal or disjoint; the saturations are the
//! information cells of that space. Awareness is a space chosen per
//! bottom information cell. A state ω sees its information cell projected
//! to `L(ω)`, the meet of its own space with the awareness space of its
//! bottom cell.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epistemics::Correspondence;
use crate::lattice::{Lattice, RawLattice, RawProjection, RawSpace, SpaceId};
use crate::model::UnawarenessModel;
use crate::preferences::{induce_preferences, WeightScheme};
use crate::stateset::StateSet;

use super::{GenConfig, Shape};

/// Cell label per point, relabelled in order of first appearance.
type Partition = Vec<usize>;

fn canonical(labels: &[usize]) -> Partition {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

fn cells(p: &Partition) -> usize {
    p.iter().max().map_or(0, |m| m + 1)
}

/// `fine` refines `coarse`.
fn refines(fine: &Partition, coarse: &Partition) -> bool {
    (0..fine.len()).all(|i| (0..fine.len()).all(|j| fine[i] != fine[j] || coarse[i] == coarse[j]))
}

fn common_refinement(a: &Partition, b: &Partition) -> Partition {
    let pairs: Vec<usize> = a.iter().zip(b).map(|(x, y)| x * a.len() + y).collect();
    canonical(&pairs)
}

fn common_coarsening(a: &Partition, b: &Partition) -> Partition {
    let n = a.len();
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if (a[i] == a[j] || b[i] == b[j]) && label[i] != label[j] {
                    let m = label[i].min(label[j]);
                    label[i] = m;
                    label[j] = m;
                    changed = true;
                }
            }
        }
    }
    canonical(&label)
}

/// A partition with a uniformly drawn number of nonempty cells.
fn random_partition(rng: &mut ChaCha8Rng, points: usize, max_cells: usize) -> Partition {
    let k = rng.gen_range(1..=max_cells.min(points));
    let mut order: Vec<usize> = (0..points).collect();
    order.shuffle(rng);
    let mut labels = vec![0; points];
    for (i, &pt) in order.iter().enumerate() {
        labels[pt] = if i < k { i } else { rng.gen_range(0..k) };
    }
    canonical(&labels)
}

/// Draw from `lo..=hi`, clamping `lo` to `hi`.
fn at_least(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo.min(hi)..=hi)
}

fn merge_two_cells(rng: &mut ChaCha8Rng, p: &Partition) -> Partition {
    let k = cells(p);
    let a = rng.gen_range(0..k);
    let mut b = rng.gen_range(0..k - 1);
    if b >= a {
        b += 1;
    }
    canonical(&p.iter().map(|&l| if l == b { a } else { l }).collect::<Vec<_>>())
}

fn chain(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Vec<Partition> {
    let length = at_least(rng, 2, cfg.max_spaces);
    let points = at_least(rng, length, cfg.max_states_per_space);
    let mut family = vec![(0..points).collect::<Partition>()];
    while family.len() < length {
        let last = family.last().expect("nonempty");
        if cells(last) < 2 {
            break;
        }
        let next = merge_two_cells(rng, last);
        family.push(next);
    }
    family
}

fn diamond(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Option<Vec<Partition>> {
    if cfg.max_spaces < 4 || cfg.max_states_per_space < 3 {
        return None;
    }
    for _ in 0..64 {
        let points = rng.gen_range(3..=cfg.max_states_per_space);
        let a = random_partition(rng, points, cfg.max_states_per_space);
        let b = random_partition(rng, points, cfg.max_states_per_space);
        if refines(&a, &b) || refines(&b, &a) {
            continue;
        }
        let top = common_refinement(&a, &b);
        if cells(&top) > cfg.max_states_per_space {
            continue;
        }
        let bottom = common_coarsening(&a, &b);
        return Some(vec![top, a, b, bottom]);
    }
    None
}

fn close(family: Vec<Partition>) -> Vec<Partition> {
    let mut set: BTreeSet<Partition> = family.into_iter().collect();
    loop {
        let items: Vec<Partition> = set.iter().cloned().collect();
        let before = set.len();
        for a in &items {
            for b in &items {
                set.insert(common_refinement(a, b));
            }
        }
        if set.len() == before {
            break;
        }
    }
    let bottom = set
        .iter()
        .cloned()
        .reduce(|a, b| common_coarsening(&a, &b))
        .expect("nonempty family");
    set.insert(bottom);
    set.into_iter().collect()
}

fn random_family(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Option<Vec<Partition>> {
    for _ in 0..64 {
        let points = at_least(rng, 2, cfg.max_states_per_space);
        let k = at_least(rng, 2, cfg.max_spaces);
        let family = close(
            (0..k)
                .map(|_| random_partition(rng, points, cfg.max_states_per_space))
                .collect(),
        );
        if family.len() <= cfg.max_spaces {
            return Some(family);
        }
    }
    None
}

/// Union of the cells of `p` that meet `points`, as a point mask.
fn saturate(p: &Partition, points: &[bool]) -> Vec<bool> {
    let hit: BTreeSet<usize> = (0..p.len()).filter(|&i| points[i]).map(|i| p[i]).collect();
    (0..p.len()).map(|i| hit.contains(&p[i])).collect()
}

fn consistent(family: &[Partition], q: &Partition) -> bool {
    family.iter().all(|p| {
        let sats: Vec<Vec<bool>> = (0..cells(q))
            .map(|c| saturate(p, &q.iter().map(|&l| l == c).collect::<Vec<_>>()))
            .collect();
        sats.iter().all(|a| {
            sats.iter()
                .all(|b| a == b || a.iter().zip(b).all(|(x, y)| !(*x && *y)))
        })
    })
}

fn information(rng: &mut ChaCha8Rng, family: &[Partition], points: usize) -> Partition {
    let mut q = vec![0; points];
    for _ in 0..rng.gen_range(0..=2 * points) {
        let k = cells(&q);
        let cell = rng.gen_range(0..k);
        let members: Vec<usize> = (0..points).filter(|&i| q[i] == cell).collect();
        if members.len() < 2 {
            continue;
        }
        let mut candidate = q.clone();
        for &i in &members {
            if rng.gen_bool(0.5) {
                candidate[i] = k;
            }
        }
        let candidate = canonical(&candidate);
        if cells(&candidate) > k && consistent(family, &candidate) {
            q = candidate;
        }
    }
    q
}

fn space_name(i: usize) -> String {
    format!("S{i}")
}

fn state_name(space: usize, cell: usize) -> String {
    format!("s{space}_{cell}")
}

fn build_lattice(family: &[Partition]) -> Lattice {
    let points = family[0].len();
    let spaces = family
        .iter()
        .enumerate()
        .map(|(i, p)| RawSpace {
            name: space_name(i),
            states: (0..cells(p)).map(|c| state_name(i, c)).collect(),
        })
        .collect();
    let mut order = Vec::new();
    let mut projections = Vec::new();
    for (hi, fine) in family.iter().enumerate() {
        for (lo, coarse) in family.iter().enumerate() {
            if hi == lo || !refines(fine, coarse) {
                continue;
            }
            order.push((space_name(lo), space_name(hi)));
            let map = (0..cells(fine))
                .map(|c| {
                    let point = (0..points).find(|&i| fine[i] == c).expect("cells are nonempty");
                    (state_name(hi, c), state_name(lo, coarse[point]))
                })
                .collect();
            projections.push(RawProjection {
                from: space_name(hi),
                to: space_name(lo),
                map,
            });
        }
    }
    Lattice::new(&RawLattice {
        spaces,
        order,
        projections,
    })
    .expect("partition families form valid lattices")
}

fn shaped_family(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Vec<Partition> {
    let family = match cfg.shape {
        Shape::Chain => Some(chain(rng, cfg)),
        Shape::Diamond => diamond(rng, cfg),
        Shape::Random => random_family(rng, cfg),
    };
    let mut family = family.unwrap_or_else(|| chain(rng, cfg));
    // Coarsest first, so that names follow expressiveness.
    family.sort_by_key(|p| (cells(p), p.clone()));
    family.dedup();
    family
}

pub(super) fn generate(cfg: &GenConfig) -> UnawarenessModel {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let family = shaped_family(&mut rng, cfg);
    let lat = build_lattice(&family);
    let points = family[0].len();
    let q = information(&mut rng, &family, points);

    let space_ids: Vec<SpaceId> = (0..family.len())
        .map(|i| lat.space_by_name(&space_name(i)).expect("generated name"))
        .collect();
    let state_id = |space: usize, cell: usize| {
        lat.state_by_name(&state_name(space, cell))
            .expect("generated name")
    };
    // Information cell of every state, as a set of states of its space.
    let mut info: Vec<StateSet> = vec![StateSet::new(); lat.state_count()];
    for (si, p) in family.iter().enumerate() {
        for qc in 0..cells(&q) {
            let sat = saturate(p, &q.iter().map(|&l| l == qc).collect::<Vec<_>>());
            let cell: StateSet = (0..points)
                .filter(|&i| sat[i])
                .map(|i| state_id(si, p[i]))
                .collect();
            for s in cell.iter() {
                info[s.index()] = cell.clone();
            }
        }
    }
    let bottom = lat.bottom();
    let mut bottom_cells: Vec<StateSet> = Vec::new();
    for &b in lat.states_of(bottom) {
        if !bottom_cells.iter().any(|c| c.contains(b)) {
            bottom_cells.push(info[b.index()].clone());
        }
    }
    let awareness: Vec<SpaceId> = bottom_cells
        .iter()
        .map(|_| *space_ids.choose(&mut rng).expect("nonempty"))
        .collect();
    let pi: Vec<StateSet> = lat
        .states()
        .map(|w| {
            let wb = lat.try_project(w, bottom).expect("bottom is below everything");
            let cell = bottom_cells
                .iter()
                .position(|c| c.contains(wb))
                .expect("bottom cells cover the bottom space");
            let level = lat.meet_pair(lat.space_of(w), awareness[cell]);
            lat.project_set(&info[w.index()], level)
                .expect("level is below the state's space")
        })
        .collect();
    let c = Correspondence::new(&lat, pi).expect("one value per state");
    let preferences = cfg.weight_scheme.map(|scheme| {
        let scheme = match scheme {
            WeightScheme::SeededRandom(s) => WeightScheme::SeededRandom(s ^ cfg.seed),
            WeightScheme::Uniform => WeightScheme::Uniform,
        };
        induce_preferences(&lat, &c, scheme)
    });
    UnawarenessModel {
        lattice: lat,
        correspondence: Some(c),
        preferences,
        events: Vec::new(),
    }
}

