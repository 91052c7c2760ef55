use std::collections::HashMap;

pub(crate) type Counter<'a> = HashMap<&'a [String], usize>;

pub(crate) fn ngrams(tokens: &[String], n: usize) -> Counter<'_> {
    let mut counts = HashMap::new();
    if n > 0 {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

pub(crate) fn total(c: &Counter<'_>) -> usize {
    c.values().sum()
}

/// Multiset intersection size.
pub(crate) fn overlap(a: &Counter<'_>, b: &Counter<'_>) -> usize {
    a.iter().map(|(g, &x)| x.min(b.get(g).copied().unwrap_or(0))).sum()
}

pub(crate) fn intersect<'a>(a: &Counter<'a>, b: &Counter<'a>) -> Counter<'a> {
    a.iter()
        .filter_map(|(g, &x)| {
            let k = x.min(b.get(g).copied().unwrap_or(0));
            (k > 0).then_some((*g, k))
        })
        .collect()
}

pub(crate) fn subtract<'a>(a: &Counter<'a>, b: &Counter<'a>) -> Counter<'a> {
    a.iter()
        .filter_map(|(g, &x)| {
            let k = x.saturating_sub(b.get(g).copied().unwrap_or(0));
            (k > 0).then_some((*g, k))
        })
        .collect()
}
