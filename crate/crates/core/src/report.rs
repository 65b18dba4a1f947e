//! CSV tables for reports, and readers for the ones plots are re-rendered from.
//!
//! All tables are UTF-8, comma separated, with a header row and `.` as the
//! decimal point. Floats use the shortest representation that round-trips.

use std::path::Path;

use crate::analysis::{HomogeneityReport, ProfilePoint, RegisterProfile, SimilarityMatrix};
use crate::error::{Error, Result};
use crate::similarity::SimilarityScore;
use crate::validation::ValidationReport;

pub const HOMOGENEITY_HEADER: [&str; 7] = ["corpus_id", "mean_z", "std_z", "bayes_mean", "lo90", "hi90", "n_pairs"];
pub const HOMOGENEITY_PAIRS_HEADER: [&str; 5] = ["corpus_id", "sample_a", "sample_b", "rho", "z"];
pub const PROFILE_HEADER: [&str; 4] = ["source", "sample_index", "z_to_TW", "z_to_WK"];
pub const VALIDATION_HEADER: [&str; 3] = ["language", "features", "accuracy"];

fn table<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn homogeneity_csv(reports: &[HomogeneityReport]) -> String {
    table(
        &HOMOGENEITY_HEADER,
        reports.iter().map(|r| {
            vec![
                r.corpus_id.clone(),
                num(r.mean_z),
                num(r.std_z),
                num(r.bayes_mean),
                num(r.interval_90.0),
                num(r.interval_90.1),
                r.n_pairs.to_string(),
            ]
        }),
    )
}

/// Per-pair standardized scores behind the homogeneity summaries.
pub fn homogeneity_pairs_csv(groups: &[(String, Vec<SimilarityScore>)]) -> String {
    table(
        &HOMOGENEITY_PAIRS_HEADER,
        groups.iter().flat_map(|(id, scores)| {
            scores.iter().map(move |s| {
                vec![
                    id.clone(),
                    s.sample_indices.0.to_string(),
                    s.sample_indices.1.to_string(),
                    num(s.rho),
                    s.z.map(num).unwrap_or_default(),
                ]
            })
        }),
    )
}

pub fn profile_csv(profile: &RegisterProfile) -> String {
    table(
        &PROFILE_HEADER,
        profile.points.iter().map(|p| {
            vec![
                p.source_corpus_id.clone(),
                p.sample_index.to_string(),
                num(p.z_to_tw),
                num(p.z_to_wk),
            ]
        }),
    )
}

/// Square matrix with an `id` column followed by one column per corpus.
pub fn matrix_csv(matrix: &SimilarityMatrix) -> String {
    let header: Vec<&str> = std::iter::once("id").chain(matrix.ids.iter().map(String::as_str)).collect();
    table(
        &header,
        matrix.ids.iter().zip(&matrix.values).map(|(id, row)| {
            std::iter::once(id.clone()).chain(row.iter().map(|&x| num(x))).collect::<Vec<_>>()
        }),
    )
}

/// One row per language: the best feature type and its mean accuracy.
pub fn validation_csv(reports: &[ValidationReport]) -> String {
    table(
        &VALIDATION_HEADER,
        reports
            .iter()
            .map(|r| vec![r.language_code.clone(), r.best.to_string(), num(r.best_accuracy())]),
    )
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let parse_err = |reason: String| Error::Parse {
        path: path.to_owned(),
        reason,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| parse_err(e.to_string()))?;
    let found = r.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_err(format!("expected header {}", header.join(","))));
    }
    r.records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| parse_err(e.to_string()))
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize) -> Result<T> {
    rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse {
        path: path.to_owned(),
        reason: format!("bad field {i} in row {:?}", rec.iter().collect::<Vec<_>>()),
    })
}

/// Reads `homogeneity_pairs` rows back as `(corpus_id, z)` groups, in file order.
pub fn read_homogeneity_pairs(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for rec in read_rows(path, &HOMOGENEITY_PAIRS_HEADER)? {
        let id = rec[0].to_owned();
        let z: f64 = field(path, &rec, 4)?;
        match groups.last_mut() {
            Some((last, zs)) if *last == id => zs.push(z),
            _ => groups.push((id, vec![z])),
        }
    }
    Ok(groups)
}

pub fn read_profile(path: &Path) -> Result<RegisterProfile> {
    let points = read_rows(path, &PROFILE_HEADER)?
        .iter()
        .map(|rec| {
            Ok(ProfilePoint {
                source_corpus_id: rec[0].to_owned(),
                sample_index: field(path, rec, 1)?,
                z_to_tw: field(path, rec, 2)?,
                z_to_wk: field(path, rec, 3)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RegisterProfile { points })
}
