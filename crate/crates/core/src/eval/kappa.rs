use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::{AnnotationLabel, DocumentPair, DomainTag, SentenceAlignmentRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub kappa: f64,
    pub observed_agreement: f64,
    pub expected_agreement: f64,
    pub n_items: usize,
    /// `(kappa, n_items)` per domain; domains with fewer than two items are left out.
    pub per_domain: BTreeMap<DomainTag, (f64, usize)>,
}

fn slot(label: AnnotationLabel) -> usize {
    match label {
        AnnotationLabel::Aligned => 0,
        AnnotationLabel::Partial => 1,
        AnnotationLabel::NotAligned => 2,
    }
}

/// Three-category Cohen's κ with chance agreement from the marginal products.
///
/// When both annotators use a single category throughout, chance agreement is 1
/// and κ is reported as 1.
pub fn cohen_kappa(labels_a: &[AnnotationLabel], labels_b: &[AnnotationLabel]) -> Result<AgreementReport> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::Validation(format!(
            "label lists differ in length: {} vs {}",
            labels_a.len(),
            labels_b.len()
        )));
    }
    let n = labels_a.len();
    if n < 2 {
        return Err(Error::Validation(format!("kappa needs at least 2 items, got {n}")));
    }
    let mut table = [[0usize; 3]; 3];
    for (&a, &b) in labels_a.iter().zip(labels_b) {
        table[slot(a)][slot(b)] += 1;
    }
    let nf = n as f64;
    let p_o = (0..3).map(|k| table[k][k]).sum::<usize>() as f64 / nf;
    let p_e: f64 = (0..3)
        .map(|k| {
            let row: usize = table[k].iter().sum();
            let col: usize = table.iter().map(|r| r[k]).sum();
            (row as f64 / nf) * (col as f64 / nf)
        })
        .sum();
    let kappa = if (1.0 - p_e).abs() < 1e-15 {
        if p_o == 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (p_o - p_e) / (1.0 - p_e)
    };
    Ok(AgreementReport {
        kappa,
        observed_agreement: p_o,
        expected_agreement: p_e,
        n_items: n,
        per_domain: BTreeMap::new(),
    })
}

/// Overall κ plus κ on each domain's sublist.
pub fn agreement_by_domain(items: &[(DomainTag, AnnotationLabel, AnnotationLabel)]) -> Result<AgreementReport> {
    let a: Vec<_> = items.iter().map(|i| i.1).collect();
    let b: Vec<_> = items.iter().map(|i| i.2).collect();
    let mut report = cohen_kappa(&a, &b)?;
    let domains: BTreeSet<DomainTag> = items.iter().map(|i| i.0).collect();
    for domain in domains {
        let (da, db): (Vec<_>, Vec<_>) = items
            .iter()
            .filter(|i| i.0 == domain)
            .map(|i| (i.1, i.2))
            .unzip();
        match cohen_kappa(&da, &db) {
            Ok(r) => {
                report.per_domain.insert(domain, (r.kappa, r.n_items));
            }
            Err(e) => log::debug!("no kappa for domain {domain}: {e}"),
        }
    }
    Ok(report)
}

/// One label per complex × simple combination, row-major. Combinations inside
/// a record take the record's label (aligned when unlabeled); all others are
/// not aligned.
pub fn build_combination_labels(gold: &[SentenceAlignmentRecord], pair: &DocumentPair) -> Vec<AnnotationLabel> {
    let cols = pair.simple.len();
    let mut labels = vec![AnnotationLabel::NotAligned; pair.complex.len() * cols];
    for record in gold {
        let label = record.label.unwrap_or(AnnotationLabel::Aligned);
        for (i, j) in record.expand_to_pairs() {
            if i < pair.complex.len() && j < cols {
                labels[i * cols + j] = label;
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use AnnotationLabel::*;

    #[test]
    fn identical_lists() {
        let a = [Aligned, NotAligned, Partial, Aligned];
        assert_eq!(cohen_kappa(&a, &a).unwrap().kappa, 1.0);
        let same = [Aligned; 5];
        assert_eq!(cohen_kappa(&same, &same).unwrap().kappa, 1.0);
    }

    #[test]
    fn hand_matrix() {
        let mut a = vec![Aligned; 4];
        let mut b = vec![Aligned; 4];
        a.extend([NotAligned; 4]);
        b.extend([NotAligned; 4]);
        a.extend([Aligned, NotAligned]);
        b.extend([NotAligned, Aligned]);
        let rep = cohen_kappa(&a, &b).unwrap();
        assert!((rep.observed_agreement - 0.8).abs() < 1e-12);
        assert!((rep.expected_agreement - 0.5).abs() < 1e-12);
        assert!((rep.kappa - 0.6).abs() < 1e-9);
        assert_eq!(cohen_kappa(&b, &a).unwrap().kappa, rep.kappa);
    }

    #[test]
    fn errors() {
        assert!(cohen_kappa(&[Aligned], &[Aligned]).is_err());
        assert!(cohen_kappa(&[Aligned, Aligned], &[Aligned]).is_err());
    }

    #[test]
    fn per_domain() {
        let items = [
            (DomainTag::News, Aligned, Aligned),
            (DomainTag::News, NotAligned, NotAligned),
            (DomainTag::Bible, Aligned, NotAligned),
            (DomainTag::Bible, NotAligned, Aligned),
            (DomainTag::Health, Aligned, Aligned),
        ];
        let rep = agreement_by_domain(&items).unwrap();
        assert_eq!(rep.n_items, 5);
        assert_eq!(rep.per_domain[&DomainTag::News], (1.0, 2));
        assert_eq!(rep.per_domain[&DomainTag::Bible], (-1.0, 2));
        assert!(!rep.per_domain.contains_key(&DomainTag::Health));
    }

    #[test]
    fn combination_labels() {
        let doc = |id: &str, n: usize| {
            Document::from_paragraphs(id, [(0..n).map(|i| format!("Satz {i}."))]).unwrap()
        };
        let p = DocumentPair::new("p", doc("c", 2), doc("s", 2), DomainTag::Other).unwrap();
        let labels = build_combination_labels(&[SentenceAlignmentRecord::pair(0, 0)], &p);
        assert_eq!(labels, [Aligned, NotAligned, NotAligned, NotAligned]);
        assert!(build_combination_labels(&[], &p).iter().all(|&l| l == NotAligned));
        let p = DocumentPair::new("p", doc("c", 1), doc("s", 2), DomainTag::Other).unwrap();
        let r = SentenceAlignmentRecord::new([0], [0, 1]).unwrap();
        assert_eq!(build_combination_labels(&[r], &p), [Aligned, Aligned]);
    }
}
