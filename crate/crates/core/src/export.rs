//! Line-oriented JSON and CSV record formats. Floats are printed with 17
//! significant digits so every value round-trips exactly through parsing.

use std::io::{self, Write};

use crate::perm::{CycleCounts, Permutation};
use crate::records::{RecordTrace, Stretch};
use crate::shepp_lloyd::RandomSizePermutation;
use crate::stretch_ppp::ThetaPoint;

/// 17-significant-digit scientific notation; lossless for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn join_u64(values: impl IntoIterator<Item = u64>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn space_join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One sampled coupling record:
/// `{"theta":…,"n":…,"bits":[…],"perm":[…],"cycle_counts":[…]}` with the
/// permutation 1-based and counts padded to length n.
pub fn feller_json<W: Write>(
    w: &mut W,
    theta: f64,
    bits: &[u8],
    perm: &Permutation,
    counts: &CycleCounts,
) -> io::Result<()> {
    writeln!(
        w,
        "{{\"theta\":{},\"n\":{},\"bits\":[{}],\"perm\":[{}],\"cycle_counts\":[{}]}}",
        fmt_f64(theta),
        perm.n(),
        join_u64(bits.iter().map(|&b| u64::from(b))),
        join_u64(perm.one_based_image().iter().map(|&v| u64::from(v))),
        join_u64(counts.padded(perm.n())),
    )
}

/// CSV row `theta,n,bits,perm,cycle_counts` with compact inner encodings:
/// bits as a 0/1 string, the rest space-separated.
pub fn feller_csv<W: Write>(
    w: &mut W,
    theta: f64,
    bits: &[u8],
    perm: &Permutation,
    counts: &CycleCounts,
) -> io::Result<()> {
    let bit_str: String = bits
        .iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect();
    writeln!(
        w,
        "{},{},{},{},{}",
        fmt_f64(theta),
        perm.n(),
        bit_str,
        space_join(perm.one_based_image()),
        space_join(counts.padded(perm.n())),
    )
}

/// `{"theta":…,"u":[…],"records":[…],"perm":[…]}` with 1-based record
/// indices.
pub fn record_trace_json<W: Write>(
    w: &mut W,
    theta: f64,
    trace: &RecordTrace,
    perm: &Permutation,
) -> io::Result<()> {
    writeln!(
        w,
        "{{\"theta\":{},\"u\":[{}],\"records\":[{}],\"perm\":[{}]}}",
        fmt_f64(theta),
        join_f64(trace.u()),
        join_u64(trace.record_indices_one_based().iter().map(|&v| v as u64)),
        join_u64(perm.one_based_image().iter().map(|&v| u64::from(v))),
    )
}

/// CSV row `theta,n,u,records,perm` (space-separated inner lists).
pub fn record_trace_csv<W: Write>(
    w: &mut W,
    theta: f64,
    trace: &RecordTrace,
    perm: &Permutation,
) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{}",
        fmt_f64(theta),
        trace.len(),
        space_join(trace.u().iter().map(|&v| fmt_f64(v))),
        space_join(trace.record_indices_one_based()),
        space_join(perm.one_based_image()),
    )
}

/// Window metadata header `{"s":…,"theta":…,"seed":…}`.
pub fn window_header_json<W: Write>(w: &mut W, s: f64, theta: f64, seed: u64) -> io::Result<()> {
    writeln!(
        w,
        "{{\"s\":{},\"theta\":{},\"seed\":{}}}",
        fmt_f64(s),
        fmt_f64(theta),
        seed
    )
}

/// Dynamic-coupling header `{"s":…,"theta_max":…,"seed":…}`.
pub fn dynamic_header_json<W: Write>(
    w: &mut W,
    s: f64,
    theta_max: f64,
    seed: u64,
) -> io::Result<()> {
    writeln!(
        w,
        "{{\"s\":{},\"theta_max\":{},\"seed\":{}}}",
        fmt_f64(s),
        fmt_f64(theta_max),
        seed
    )
}

/// One sampled window: `{"window":…,"stretches":[[…],…]}` (empty windows
/// produce an empty list, so the record count equals the sample count).
pub fn ppp_window_json<W: Write>(w: &mut W, window: u64, stretches: &[Stretch]) -> io::Result<()> {
    let inner: Vec<String> = stretches
        .iter()
        .map(|s| format!("[{}]", join_f64(s.values())))
        .collect();
    writeln!(
        w,
        "{{\"window\":{},\"stretches\":[{}]}}",
        window,
        inner.join(",")
    )
}

/// CSV row `window,count,lengths,values`; stretches are `|`-separated in the
/// last column, values space-separated inside each stretch.
pub fn ppp_window_csv<W: Write>(w: &mut W, window: u64, stretches: &[Stretch]) -> io::Result<()> {
    let lengths = space_join(stretches.iter().map(|s| s.len()));
    let values: Vec<String> = stretches
        .iter()
        .map(|s| space_join(s.values().iter().map(|&v| fmt_f64(v))))
        .collect();
    writeln!(
        w,
        "{},{},{},{}",
        window,
        stretches.len(),
        lengths,
        values.join("|")
    )
}

/// One point of the product process: `{"theta_coord":…,"values":[…]}`.
pub fn theta_point_json<W: Write>(w: &mut W, point: &ThetaPoint) -> io::Result<()> {
    writeln!(
        w,
        "{{\"theta_coord\":{},\"values\":[{}]}}",
        fmt_f64(point.theta_coord),
        join_f64(point.stretch.values()),
    )
}

/// CSV row `point,theta_coord,values`.
pub fn theta_point_csv<W: Write>(w: &mut W, index: u64, point: &ThetaPoint) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{}",
        index,
        fmt_f64(point.theta_coord),
        space_join(point.stretch.values().iter().map(|&v| fmt_f64(v))),
    )
}

/// `{"theta":…,"p":…,"size":…,"cycle_counts":[…]}`; counts run up to the
/// longest cycle present.
pub fn shepp_lloyd_json<W: Write>(
    w: &mut W,
    theta: f64,
    p: f64,
    rsp: &RandomSizePermutation,
) -> io::Result<()> {
    let counts = rsp.cycle_counts();
    writeln!(
        w,
        "{{\"theta\":{},\"p\":{},\"size\":{},\"cycle_counts\":[{}]}}",
        fmt_f64(theta),
        fmt_f64(p),
        rsp.size(),
        join_u64(counts.padded(counts.max_len())),
    )
}

/// CSV row `theta,p,size,cycle_counts`.
pub fn shepp_lloyd_csv<W: Write>(
    w: &mut W,
    theta: f64,
    p: f64,
    rsp: &RandomSizePermutation,
) -> io::Result<()> {
    let counts = rsp.cycle_counts();
    writeln!(
        w,
        "{},{},{},{}",
        fmt_f64(theta),
        fmt_f64(p),
        rsp.size(),
        space_join(counts.padded(counts.max_len())),
    )
}

/// Permutation as a standalone JSON object `{"n":…,"image":[…]}` (1-based),
/// with the cycle form as a list of lists.
pub fn permutation_json(perm: &Permutation) -> String {
    let cycles: Vec<String> = perm
        .cycles()
        .one_based()
        .iter()
        .map(|c| format!("[{}]", join_u64(c.iter().map(|&v| u64::from(v)))))
        .collect();
    format!(
        "{{\"n\":{},\"image\":[{}],\"cycles\":[{}]}}",
        perm.n(),
        join_u64(perm.one_based_image().iter().map(|&v| u64::from(v))),
        cycles.join(",")
    )
}
