//! Query selection over model probabilities.

/// Binary entropy in nats: `-p ln p - (1-p) ln(1-p)`, with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Word with maximal predictive entropy; ties go to the lexicographically
/// smaller word.
pub fn select_max_entropy<'a, I>(candidates: I) -> Option<&'a str>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut best: Option<(&str, f64)> = None;
    for (word, p) in candidates {
        let h = binary_entropy(p);
        best = match best {
            Some((bw, bh)) if bh > h || (bh == h && bw <= word) => Some((bw, bh)),
            _ => Some((word, h)),
        };
    }
    best.map(|(w, _)| w)
}

/// Word whose probability is closest to 0.5; ties go to the smaller word.
pub fn select_min_margin<'a, I>(candidates: I) -> Option<&'a str>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut best: Option<(&str, f64)> = None;
    for (word, p) in candidates {
        let margin = (p - 0.5).abs();
        best = match best {
            Some((bw, bm)) if bm < margin || (bm == margin && bw <= word) => Some((bw, bm)),
            _ => Some((word, margin)),
        };
    }
    best.map(|(w, _)| w)
}
