//! Deterministic worst-case linear-time selection (median of medians).
//!
//! The routines here never allocate. They reorder the input slice so that,
//! on return, every element before rank `k` compares `<=` the selected
//! value and every element after it compares `>=`.

use crate::error::{Error, Result};

/// Slices at or below this length are finished by insertion sort.
const SMALL: usize = 16;

/// Returns the `k`-th smallest value (0-based) of `values`, partitioning the
/// slice about it.
pub fn select_kth(values: &mut [f64], k: usize) -> Result<f64> {
    if k >= values.len() {
        return Err(Error::Rank {
            k,
            len: values.len(),
        });
    }
    let idx = select_nth_by_key(values, k, |x| *x);
    Ok(values[idx])
}

/// Generic form of [`select_kth`]: orders elements by `key` and returns the
/// position (always `k`) holding the `k`-th smallest element.
///
/// `key` must not produce NaN. Panics if `k >= data.len()`.
pub fn select_nth_by_key<T, K>(data: &mut [T], k: usize, key: K) -> usize
where
    K: Fn(&T) -> f64 + Copy,
{
    assert!(k < data.len(), "rank {k} out of range for {}", data.len());
    let mut lo = 0;
    let mut hi = data.len();
    loop {
        let window = &mut data[lo..hi];
        if window.len() <= SMALL {
            insertion_sort(window, key);
            return k;
        }
        let pivot = median_of_medians(window, key);
        let (lt, gt) = partition3(window, pivot, key);
        if k < lo + lt {
            hi = lo + lt;
        } else if k < lo + gt {
            return k;
        } else {
            lo += gt;
        }
    }
}

/// Median of the medians of groups of five, which has at least 30% of `data`
/// on either side. Moves the group medians to the front of `data` and
/// selects among them recursively.
pub(crate) fn median_of_medians<T, K>(data: &mut [T], key: K) -> f64
where
    K: Fn(&T) -> f64 + Copy,
{
    let len = data.len();
    debug_assert!(len > 0);
    let mut groups = 0;
    let mut start = 0;
    while start < len {
        let end = (start + 5).min(len);
        insertion_sort(&mut data[start..end], key);
        data.swap(groups, start + (end - start - 1) / 2);
        groups += 1;
        start = end;
    }
    let medians = &mut data[..groups];
    let mid = select_nth_by_key(medians, groups / 2, key);
    key(&medians[mid])
}

/// Three-way partition around `pivot`. Returns `(lt, gt)` such that
/// `data[..lt] < pivot`, `data[lt..gt] == pivot` and `data[gt..] > pivot`.
pub(crate) fn partition3<T, K>(data: &mut [T], pivot: f64, key: K) -> (usize, usize)
where
    K: Fn(&T) -> f64,
{
    let mut lt = 0;
    let mut i = 0;
    let mut gt = data.len();
    while i < gt {
        let x = key(&data[i]);
        if x < pivot {
            data.swap(lt, i);
            lt += 1;
            i += 1;
        } else if x > pivot {
            gt -= 1;
            data.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt)
}

fn insertion_sort<T, K>(data: &mut [T], key: K)
where
    K: Fn(&T) -> f64,
{
    for i in 1..data.len() {
        let mut j = i;
        while j > 0 && key(&data[j - 1]) > key(&data[j]) {
            data.swap(j - 1, j);
            j -= 1;
        }
    }
}
