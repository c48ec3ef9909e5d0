//! Census of all blowup configurations: exhaustive enumeration, orbit
//! deduplication under relabelings of the base fan, and a scan classifying
//! each orbit by its nontrivial toric symmetries.
//!
//! Two configurations are equivalent when a relabeling matches their point
//! sets as sets and their line sequences position by position. Blowups of
//! equivalent configurations are isomorphic; the converse can fail — line
//! blowups along disjoint centers commute, so several orbits may share one
//! fan. All such orbits are reported, each with its own record.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::blowup::{build, BlowupCenter, BlowupConfig};

/// The four configuration classes carrying nontrivial symmetry.
///
/// In rank 3 these are the configurations of the classification: a point
/// with two lines meeting away from it (A), two points on the outer lines
/// of a chain blown up ends-first (B) or middle-first (C), and the maximal
/// blowup at all points and lines (D). In rank 2 the maximal blowup is the
/// only symmetric one and is likewise labeled D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    A,
    B,
    C,
    D,
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ClassLabel::A => "A",
            ClassLabel::B => "B",
            ClassLabel::C => "C",
            ClassLabel::D => "D",
        };
        f.write_str(s)
    }
}

/// One deduplicated orbit of configurations and its scan results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub representative: BlowupConfig,
    pub orbit_size: usize,
    pub n_symmetries: usize,
    pub n_nontrivial: usize,
    pub n_nontrivial_up_to_relabeling: usize,
    pub class_label: Option<ClassLabel>,
}

/// All ordered blowup configurations: every point subset combined with
/// every ordered sequence of distinct lines (rank 3), or every point subset
/// (rank 2). Includes the empty configuration.
pub fn enumerate_configs(rank: usize) -> Vec<BlowupConfig> {
    let points = all_points(rank);
    let lines = all_lines(rank);

    let mut point_subsets: Vec<Vec<BlowupCenter>> = Vec::new();
    for mask in 0..(1u32 << points.len()) {
        let subset: Vec<BlowupCenter> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        point_subsets.push(subset);
    }

    let mut line_seqs: Vec<Vec<BlowupCenter>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<BlowupCenter>> = vec![Vec::new()];
    for _ in 0..lines.len() {
        let mut next = Vec::new();
        for seq in &frontier {
            for l in &lines {
                if !seq.contains(l) {
                    let mut extended = seq.clone();
                    extended.push(l.clone());
                    next.push(extended);
                }
            }
        }
        line_seqs.extend(next.iter().cloned());
        frontier = next;
    }

    let mut out = Vec::with_capacity(point_subsets.len() * line_seqs.len());
    for ps in &point_subsets {
        for ls in &line_seqs {
            out.push(
                BlowupConfig::new(rank, ps.clone(), ls.clone())
                    .expect("enumerated configurations are valid"),
            );
        }
    }
    out
}

fn all_points(rank: usize) -> Vec<BlowupCenter> {
    match rank {
        3 => vec![
            BlowupCenter::point(&[1, 2, 3]),
            BlowupCenter::point(&[1, 2, 4]),
            BlowupCenter::point(&[1, 3, 4]),
            BlowupCenter::point(&[2, 3, 4]),
        ],
        2 => vec![
            BlowupCenter::point(&[1, 2]),
            BlowupCenter::point(&[1, 3]),
            BlowupCenter::point(&[2, 3]),
        ],
        r => panic!("unsupported rank {r}"),
    }
}

fn all_lines(rank: usize) -> Vec<BlowupCenter> {
    match rank {
        3 => vec![
            BlowupCenter::line(&[1, 2]),
            BlowupCenter::line(&[1, 3]),
            BlowupCenter::line(&[1, 4]),
            BlowupCenter::line(&[2, 3]),
            BlowupCenter::line(&[2, 4]),
            BlowupCenter::line(&[3, 4]),
        ],
        2 => Vec::new(),
        r => panic!("unsupported rank {r}"),
    }
}

/// The permutations of the original ray indices (S4 in rank 3, S3 in rank 2),
/// each as the image list of 1..=n.
fn relabelings(rank: usize) -> Vec<Vec<u8>> {
    let n = rank as u8 + 1;
    let mut perms = Vec::new();
    let mut items: Vec<u8> = (1..=n).collect();
    permute(&mut items, 0, &mut perms);
    perms
}

fn permute(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// The lexicographically least relabeled image of a configuration.
pub fn canonical_form(config: &BlowupConfig) -> BlowupConfig {
    relabelings(config.rank)
        .iter()
        .map(|perm| config.relabel(perm))
        .min()
        .expect("at least the identity relabeling")
}

/// An orbit of configurations under relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: BlowupConfig,
    pub size: usize,
}

/// Groups configurations into orbits under the relabeling action, keyed by
/// canonical representative, sorted by representative.
pub fn dedup(configs: &[BlowupConfig]) -> Vec<Orbit> {
    let mut orbits: BTreeMap<BlowupConfig, usize> = BTreeMap::new();
    for config in configs {
        *orbits.entry(canonical_form(config)).or_insert(0) += 1;
    }
    orbits
        .into_iter()
        .map(|(representative, size)| Orbit { representative, size })
        .collect()
}

/// Class label of an orbit, decided by the identity of its centers: the
/// maximal blowup is D; the three specific point/line-chain orbits are A,
/// B and C. The label is a property of the configuration, independent of
/// the scan.
pub fn class_label_of(representative: &BlowupConfig) -> Option<ClassLabel> {
    let rank = representative.rank;
    if representative.points.len() == all_points(rank).len()
        && representative.lines.len() == all_lines(rank).len()
    {
        return Some(ClassLabel::D);
    }
    if rank != 3 {
        return None;
    }
    let canon = canonical_form(representative);
    for (label, tokens) in [
        (ClassLabel::A, "p123,l34,l24"),
        (ClassLabel::B, "p123,p124,l23,l34,l14"),
        (ClassLabel::C, "p123,p124,l34,l23,l14"),
    ] {
        let reference = crate::blowup::parse_centers(tokens, 3).expect("reference config");
        if canon == canonical_form(&reference) {
            return Some(label);
        }
    }
    None
}

/// Builds every orbit representative, enumerates its symmetries, and fills
/// in the counts and class label. The scan is a parallel map over orbits;
/// the output order is the deterministic orbit order of the input.
pub fn scan(orbits: &[Orbit]) -> Vec<CensusRecord> {
    orbits
        .par_iter()
        .map(|orbit| {
            let space = build(&orbit.representative).expect("orbit representatives build");
            let syms = space.find_symmetries();
            let n_nontrivial = syms.iter().filter(|s| !space.classify(s).trivial).count();
            CensusRecord {
                representative: orbit.representative.clone(),
                orbit_size: orbit.size,
                n_symmetries: syms.len(),
                n_nontrivial,
                n_nontrivial_up_to_relabeling: space.nontrivial_up_to_relabeling(&syms),
                class_label: class_label_of(&orbit.representative),
            }
        })
        .collect()
}

/// Full census result for one rank.
#[derive(Clone, Debug)]
pub struct Census {
    pub rank: usize,
    pub raw_count: usize,
    pub records: Vec<CensusRecord>,
}

pub fn run_census(rank: usize) -> Census {
    let configs = enumerate_configs(rank);
    let orbits = dedup(&configs);
    let records = scan(&orbits);
    Census { rank, raw_count: configs.len(), records }
}

impl Census {
    pub fn orbit_count(&self) -> usize {
        self.records.len()
    }

    pub fn nontrivial_records(&self) -> impl Iterator<Item = &CensusRecord> {
        self.records.iter().filter(|r| r.n_nontrivial > 0)
    }

    /// Orbit counts per class label among nontrivial records.
    pub fn class_orbit_counts(&self) -> BTreeMap<ClassLabel, usize> {
        let mut out = BTreeMap::new();
        for r in self.nontrivial_records() {
            if let Some(label) = r.class_label {
                *out.entry(label).or_insert(0) += 1;
            }
        }
        out
    }
}
