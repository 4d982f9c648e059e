//! Data-parallel helpers. With the `parallel` feature these fan out over the
//! rayon pool; without it they are plain sequential loops. Results always
//! come back in input order, so output is identical either way.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn try_map<T, U, F>(items: Vec<T>, f: F) -> Result<Vec<U>>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Result<U> + Send + Sync,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn try_map<T, U, F>(items: Vec<T>, f: F) -> Result<Vec<U>>
where
    F: Fn(T) -> Result<U>,
{
    items.into_iter().map(f).collect()
}

/// `try_map` over an inclusive degree range.
pub fn try_map_degrees<U, F>(lo: i64, hi: i64, f: F) -> Result<Vec<(i64, U)>>
where
    U: Send,
    F: Fn(i64) -> Result<U> + Send + Sync,
{
    let degrees: Vec<i64> = if lo <= hi { (lo..=hi).collect() } else { Vec::new() };
    try_map(degrees, |t| f(t).map(|u| (t, u)))
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
