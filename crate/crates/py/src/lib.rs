//! Python bindings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

/// Runs the command-line front end with `args` (without the program name).
/// Returns `(exit_code, output)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String) {
    let mut buf = Vec::new();
    let argv = std::iter::once("gmcalc".to_string()).chain(args);
    let code = gmcalc::cli::run(argv, &mut buf);
    (code, String::from_utf8_lossy(&buf).into_owned())
}

/// `v_p(1 - l^i)` for a topological generator `l` of the p-adic units.
#[pyfunction]
fn valuation_one_minus_power(p: u64, l: u64, i: u64) -> PyResult<u32> {
    gmcalc::padic::valuation_one_minus_power(p, l, i).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Surviving epsilon prefixes `eps_0..=eps_cutoff` as 0/1 strings.
#[pyfunction]
fn classify(cutoff: u64) -> PyResult<Vec<String>> {
    if cutoff < 4 {
        return Err(PyValueError::new_err("cutoff must be at least 4"));
    }
    Ok(gmcalc::dl_classify::enumerate_structures(cutoff).survivors)
}

/// `C(a, b) mod 2`, zero outside `0 <= b <= a`.
#[pyfunction]
fn binom_parity(a: i64, b: i64) -> bool {
    gmcalc::dl_classify::binom_parity(a, b)
}

#[pymodule]
fn gmcalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(valuation_one_minus_power, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(binom_parity, m)?)?;
    Ok(())
}
