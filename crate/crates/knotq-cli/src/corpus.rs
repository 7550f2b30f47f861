//! Corpus file format and the regression runner.
//!
//! A corpus is a JSON list of named knots, each given as a braid word or an
//! explicit diagram, with expected invariant data. Braid entries are
//! additionally validated against the Burau determinant oracle: a mismatch
//! between the oracle and the computed torsion order aborts the run as a
//! sourcing error.

use anyhow::{bail, Context};
use knotq::braid::BraidWord;
use knotq::burau::burau_determinant;
use knotq::diagram::DiagramSpec;
use knotq::invariant::{full_report, full_report_braid, InvariantReport, PipelineOptions};
use knotq::moves::mirror;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramSpec>,
    pub expected: Expected,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expected {
    pub torsion: Vec<u64>,
    /// Expected orbit minimum (cyclic torsion only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minv: Option<Vec<i64>>,
    /// Expected sorted multiset of q-values (all entries; used when minv is
    /// undefined).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qvalues: Option<Vec<String>>,
    /// Knot table signature metadata, used by the Gauss-phase consistency
    /// check when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
}

pub fn load_corpus(path: &std::path::Path) -> anyhow::Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read corpus file {}", path.display()))?;
    let entries: Vec<CorpusEntry> =
        serde_json::from_str(&text).context("corpus file does not parse")?;
    Ok(entries)
}

pub fn entry_report(
    entry: &CorpusEntry,
    opts: &PipelineOptions,
) -> anyhow::Result<InvariantReport> {
    match (&entry.braid, &entry.diagram) {
        (Some(b), None) => {
            let report = full_report_braid(b, opts)
                .with_context(|| format!("pipeline failed on {}", entry.name))?;
            // Sourcing guard: the Burau oracle must agree with the torsion
            // order computed by the main pipeline.
            let det = burau_determinant(b)?;
            let order: u64 = report.torsion.iter().product();
            if det.to_string() != order.to_string() {
                bail!(
                    "sourcing error for {}: Burau determinant {} but torsion order {}",
                    entry.name,
                    det,
                    order
                );
            }
            Ok(report)
        }
        (None, Some(spec)) => {
            let d = knotq::parse_diagram(spec)?;
            Ok(full_report(d, opts)?)
        }
        _ => bail!(
            "corpus entry {} must have exactly one of `braid` or `diagram`",
            entry.name
        ),
    }
}

pub struct EntryOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub fn check_entry(
    entry: &CorpusEntry,
    report: &InvariantReport,
) -> EntryOutcome {
    let mut problems = Vec::new();
    if report.torsion != entry.expected.torsion {
        problems.push(format!(
            "torsion {:?} != expected {:?}",
            report.torsion, entry.expected.torsion
        ));
    }
    if let Some(want) = &entry.expected.minv {
        match &report.minv {
            Some(got) if got == want => {}
            got => problems.push(format!("minv {got:?} != expected {want:?}")),
        }
    }
    if let Some(want) = &entry.expected.qvalues {
        if &report.fingerprint.q_values != want {
            problems.push(format!(
                "q-values {:?} != expected {:?}",
                report.fingerprint.q_values, want
            ));
        }
    }
    EntryOutcome {
        name: entry.name.clone(),
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            summary_of(report)
        } else {
            problems.join("; ")
        },
    }
}

fn summary_of(r: &InvariantReport) -> String {
    let torsion = r
        .torsion
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let minv = match &r.minv {
        Some(m) => format!(
            "{{{}}}",
            m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
        None => "n/a".into(),
    };
    format!("torsion ({torsion}), minv {minv}, verdict {}", r.verdict)
}

/// The mirror conjecture comparison for one braid entry: minv must negate and
/// the fingerprint must be the pointwise negation. Reported separately from
/// the hard regression because the underlying statement is conjectural.
pub fn mirror_check(
    entry: &CorpusEntry,
    report: &InvariantReport,
    opts: &PipelineOptions,
) -> anyhow::Result<Option<EntryOutcome>> {
    let Some(b) = &entry.braid else {
        return Ok(None);
    };
    let mirrored = full_report_braid(&mirror(b), opts)?;
    let mut problems = Vec::new();
    let expected_minv = report
        .minv
        .as_ref()
        .map(|m| {
            let mut n: Vec<i64> = m.iter().map(|x| -x).collect();
            n.sort_unstable();
            n
        });
    if mirrored.minv != expected_minv {
        problems.push(format!(
            "mirror minv {:?} != negated {:?}",
            mirrored.minv, expected_minv
        ));
    }
    if mirrored.fingerprint != report.fingerprint.negated() {
        problems.push("mirror fingerprint is not the negation".into());
    }
    Ok(Some(EntryOutcome {
        name: entry.name.clone(),
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            "mirror antisymmetry holds".into()
        } else {
            problems.join("; ")
        },
    }))
}
