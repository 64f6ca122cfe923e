/// Outcome of one instrumented heapsort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapsortRun {
    pub sorted: Vec<u32>,
    /// Sum over the second phase of how many levels above the leaf level
    /// each sift-down stopped.
    pub sum_d: u64,
    pub phase1_comparisons: u64,
}

/// Moves `a[i]` down a max-heap of size `m` (0-based). Returns the final
/// index and the number of comparisons made.
fn sift_down(a: &mut [u32], mut i: usize, m: usize) -> (usize, u64) {
    let mut cmp = 0;
    loop {
        let l = 2 * i + 1;
        if l >= m {
            return (i, cmp);
        }
        let mut c = l;
        if l + 1 < m {
            cmp += 1;
            if a[l + 1] > a[l] {
                c = l + 1;
            }
        }
        cmp += 1;
        if a[c] <= a[i] {
            return (i, cmp);
        }
        a.swap(i, c);
        i = c;
    }
}

fn depth(i: usize) -> u32 {
    (i + 1).ilog2()
}

/// Standard two-phase heapsort on a permutation.
pub fn heapsort_instrumented(perm: &[u32]) -> HeapsortRun {
    let mut a = perm.to_vec();
    let n = a.len();
    let mut phase1_comparisons = 0;
    for i in (0..n / 2).rev() {
        phase1_comparisons += sift_down(&mut a, i, n).1;
    }
    let mut sum_d = 0u64;
    for m in (1..n).rev() {
        a.swap(0, m);
        let (pos, _) = sift_down(&mut a, 0, m);
        sum_d += u64::from(m.ilog2() - depth(pos));
    }
    HeapsortRun { sorted: a, sum_d, phase1_comparisons }
}
