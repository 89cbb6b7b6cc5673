/// Maps `f` over `0..count`, in parallel when the `parallel` feature is on
/// and the current rayon pool has more than one thread. Output order is
/// always index order.
pub(crate) fn map_range<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if rayon::current_num_threads() > 1 {
            use rayon::prelude::*;
            return (0..count).into_par_iter().map(f).collect();
        }
    }
    (0..count).map(f).collect()
}
