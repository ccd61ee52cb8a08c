use num_bigint::BigUint;

use super::GlossModel;
use crate::model::MorphType;

/// Split `word` into known forms.
///
/// A segmentation with `k` segments scores the mean of `ln(count + 1)`
/// over its segments, compared exactly as products of `count + 1`. Ties go
/// to fewer segments, then to the longest first segment, second segment,
/// and so on. Without a full cover the whole word is one unknown root.
pub fn segment(model: &GlossModel, word: &str) -> Vec<(String, MorphType)> {
    let bounds: Vec<usize> = word.char_indices().map(|(i, _)| i).chain(std::iter::once(word.len())).collect();
    let n = bounds.len() - 1;
    let max_len = model.morph_counts.keys().map(|f| f.chars().count()).max().unwrap_or(0);
    let weight = |i: usize, j: usize| -> Option<BigUint> {
        let c = model.count(&word[bounds[i]..bounds[j]]);
        (c > 0).then(|| BigUint::from(c) + 1u32)
    };

    // best[i][k]: largest product covering chars i.. with exactly k segments
    let mut best: Vec<Vec<Option<BigUint>>> = vec![vec![None; n + 1]; n + 1];
    best[n][0] = Some(BigUint::from(1u32));
    for i in (0..n).rev() {
        for j in i + 1..=n.min(i + max_len) {
            let Some(w) = weight(i, j) else { continue };
            for k in 1..=n - i {
                let Some(rest) = &best[j][k - 1] else { continue };
                let cand = &w * rest;
                if best[i][k].as_ref().is_none_or(|b| cand > *b) {
                    best[i][k] = Some(cand);
                }
            }
        }
    }

    let mut chosen: Option<(usize, &BigUint)> = None;
    for (k, p) in best[0].iter().enumerate().skip(1) {
        let Some(p) = p else { continue };
        let better = match chosen {
            None => true,
            // p^(1/k) > q^(1/m)  <=>  p^m > q^k
            Some((m, q)) => p.pow(m as u32) > q.pow(k as u32),
        };
        if better {
            chosen = Some((k, p));
        }
    }
    let Some((mut k, _)) = chosen else {
        return vec![(word.to_owned(), MorphType::Root)];
    };

    let mut out = Vec::with_capacity(k);
    let mut i = 0;
    while k > 0 {
        let target = best[i][k].clone().expect("reachable state");
        let j = (i + 1..=n.min(i + max_len))
            .rev()
            .find(|&j| match (weight(i, j), &best[j][k - 1]) {
                (Some(w), Some(rest)) => w * rest == target,
                _ => false,
            })
            .expect("optimum is reconstructible");
        let form = word[bounds[i]..bounds[j]].to_owned();
        let kind = model.majority_type(&form);
        out.push((form, kind));
        i = j;
        k -= 1;
    }
    out
}
