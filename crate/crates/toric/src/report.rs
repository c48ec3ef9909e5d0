//! Serializable report payloads: the stable JSON surface of the artifact.
//!
//! Reports are wrapped in an envelope carrying a schema version and the
//! command that produced them. Payload field order is fixed by the struct
//! definitions and maps are ordered, so output is byte-stable for a fixed
//! input and schema version; no timestamps or environment data appear.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::blowup::BlowupSpace;
use crate::census::Census;
use crate::chow::CurveClass;
use crate::lattice::Int;
use crate::symmetry::ToricSymmetry;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: &'static str,
    pub command: String,
    pub payload: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, payload: T) -> Self {
        Report { schema_version: SCHEMA_VERSION, command: command.to_string(), payload }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
pub struct FanReport {
    pub rank: usize,
    pub rays: Vec<RayReport>,
    pub maximal_cones: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct RayReport {
    pub label: String,
    pub vector: Vec<Int>,
}

#[derive(Serialize)]
pub struct LedgerReport {
    pub basis: Vec<String>,
    pub ray_classes: BTreeMap<String, Vec<Int>>,
}

#[derive(Serialize)]
pub struct ChowReport {
    pub generators: Vec<String>,
    pub sr_monomials: Vec<Vec<String>>,
    pub linear_relations: Vec<BTreeMap<String, Int>>,
}

#[derive(Serialize)]
pub struct SymmetryReport {
    pub index: usize,
    pub matrix: Vec<Vec<Int>>,
    pub ray_permutation: BTreeMap<String, String>,
    pub divisor_pushforward: PushforwardReport,
    pub curve_pushforward: PushforwardReport,
    pub trivial: bool,
    pub h_coefficient: Int,
}

/// A pushforward matrix with its basis header; `columns[j]` is the image of
/// the j-th basis element in coordinates.
#[derive(Serialize)]
pub struct PushforwardReport {
    pub basis: Vec<String>,
    pub columns: Vec<Vec<Int>>,
    pub pretty: Vec<String>,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub centers: String,
    pub dim: usize,
    pub fan: FanReport,
    pub ledger: LedgerReport,
    pub chow: ChowReport,
    pub anticanonical: String,
    pub symmetries: Vec<SymmetryReport>,
    pub n_symmetries: usize,
    pub n_nontrivial: usize,
}

pub fn analyze_report(space: &BlowupSpace) -> AnalyzeReport {
    let fan = FanReport {
        rank: space.rank(),
        rays: space
            .fan
            .rays()
            .iter()
            .map(|r| RayReport { label: r.label.clone(), vector: r.vector.clone() })
            .collect(),
        maximal_cones: space
            .fan
            .maximal_cones()
            .iter()
            .map(|c| c.rays().iter().map(|&r| space.fan.rays()[r].label.clone()).collect())
            .collect(),
    };
    let ledger = LedgerReport {
        basis: space.ledger.basis_names.clone(),
        ray_classes: space
            .fan
            .rays()
            .iter()
            .map(|r| (r.label.clone(), space.ledger.ray_classes[r.id].clone()))
            .collect(),
    };
    let presentation = space.presentation();
    let chow = ChowReport {
        generators: presentation.generators,
        sr_monomials: presentation.sr_monomials,
        linear_relations: presentation
            .linear_relations
            .into_iter()
            .map(|rel| rel.into_iter().collect())
            .collect(),
    };

    let syms = space.find_symmetries();
    let symmetries: Vec<SymmetryReport> =
        syms.iter().enumerate().map(|(i, s)| symmetry_report(space, i, s)).collect();
    let n_nontrivial = syms.iter().filter(|s| !space.classify(s).trivial).count();

    AnalyzeReport {
        centers: space.config.to_token_string(),
        dim: space.rank(),
        fan,
        ledger,
        chow,
        anticanonical: space.divisor_string(&space.anticanonical()),
        n_symmetries: symmetries.len(),
        n_nontrivial,
        symmetries,
    }
}

pub fn symmetry_report(space: &BlowupSpace, index: usize, sym: &ToricSymmetry) -> SymmetryReport {
    let classification = space.classify(sym);
    let label = |r: usize| space.fan.rays()[r].label.clone();
    let divisor_pretty = (0..space.basis_dim())
        .map(|j| {
            let img = crate::chow::DivisorClass(sym.div_push.col(j));
            format!("{} -> {}", space.ledger.basis_names[j], space.divisor_string(&img))
        })
        .collect();
    let curve_names = space.ledger.curve_basis_names();
    let curve_pretty = (0..space.basis_dim())
        .map(|j| {
            // image of the j-th basis curve: units carry the sign convention
            let mut unit = vec![0; space.basis_dim()];
            unit[j] = if j == 0 { 1 } else { -1 };
            let img = CurveClass(sym.curve_push.matvec(&unit));
            format!("{} -> {}", curve_names[j], space.curve_string(&img))
        })
        .collect();
    SymmetryReport {
        index,
        matrix: sym.matrix.rows().map(<[Int]>::to_vec).collect(),
        ray_permutation: space
            .fan
            .rays()
            .iter()
            .map(|r| (label(r.id), label(sym.ray_perm[r.id])))
            .collect(),
        divisor_pushforward: PushforwardReport {
            basis: space.ledger.basis_names.clone(),
            columns: (0..space.basis_dim()).map(|j| sym.div_push.col(j)).collect(),
            pretty: divisor_pretty,
        },
        curve_pushforward: PushforwardReport {
            basis: curve_names,
            columns: (0..space.basis_dim()).map(|j| sym.curve_push.col(j)).collect(),
            pretty: curve_pretty,
        },
        trivial: classification.trivial,
        h_coefficient: classification.h_coefficient,
    }
}

#[derive(Serialize)]
pub struct CensusReport {
    pub dim: usize,
    pub raw_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nontrivial_orbit_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_orbit_counts: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<CensusRecordReport>>,
}

#[derive(Serialize)]
pub struct CensusRecordReport {
    pub representative: String,
    pub orbit_size: usize,
    pub n_symmetries: usize,
    pub n_nontrivial: usize,
    pub n_nontrivial_up_to_relabeling: usize,
    pub class_label: Option<String>,
}

pub fn census_report(census: &Census) -> CensusReport {
    CensusReport {
        dim: census.rank,
        raw_count: census.raw_count,
        orbit_count: Some(census.orbit_count()),
        nontrivial_orbit_count: Some(census.nontrivial_records().count()),
        class_orbit_counts: Some(
            census
                .class_orbit_counts()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        ),
        records: Some(
            census
                .records
                .iter()
                .map(|r| CensusRecordReport {
                    representative: r.representative.to_token_string(),
                    orbit_size: r.orbit_size,
                    n_symmetries: r.n_symmetries,
                    n_nontrivial: r.n_nontrivial,
                    n_nontrivial_up_to_relabeling: r.n_nontrivial_up_to_relabeling,
                    class_label: r.class_label.map(|l| l.to_string()),
                })
                .collect(),
        ),
    }
}

/// Census report with only the raw configuration count (dedup disabled).
pub fn raw_census_report(dim: usize, raw_count: usize) -> CensusReport {
    CensusReport {
        dim,
        raw_count,
        orbit_count: None,
        nontrivial_orbit_count: None,
        class_orbit_counts: None,
        records: None,
    }
}

#[derive(Serialize)]
pub struct PushReport {
    pub centers: String,
    pub dim: usize,
    pub symmetry_index: usize,
    pub beta: String,
    pub beta_image: String,
    pub beta_coords: Vec<Int>,
    pub beta_image_coords: Vec<Int>,
    pub identities: Vec<String>,
}

pub fn push_report(
    space: &BlowupSpace,
    symmetry_index: usize,
    beta: &CurveClass,
    image: &CurveClass,
) -> PushReport {
    let b = space.curve_string(beta);
    let bi = space.curve_string(image);
    let identities = vec![
        format!("GW_{{g, {b}}} = GW_{{g, {bi}}} for all genera g"),
        format!("DT_{{n, {b}}} = DT_{{n, {bi}}} for all Euler characteristics n"),
    ];
    PushReport {
        centers: space.config.to_token_string(),
        dim: space.rank(),
        symmetry_index,
        beta: b,
        beta_image: bi,
        beta_coords: beta.0.clone(),
        beta_image_coords: image.0.clone(),
        identities,
    }
}
