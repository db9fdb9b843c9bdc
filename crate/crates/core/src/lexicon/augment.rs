use std::collections::BTreeSet;

use super::Tuple;

/// Close a tuple set under symmetry and relation reversal.
///
/// For a symmetric relation every `(w, r, v)` gains `(v, r, w)`; for a
/// reverse pair `(r1, r2)` every `(w, r2, v)` gains `(v, r1, w)`. The result
/// is a superset of the input without duplicates.
pub fn symmetric_augment(tuples: &BTreeSet<Tuple>) -> BTreeSet<Tuple> {
    let mut out = tuples.clone();
    out.extend(tuples.iter().map(Tuple::mirrored));
    out
}
