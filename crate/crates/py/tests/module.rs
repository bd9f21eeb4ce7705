use pyo3::prelude::*;
use pyo3::types::PyDict;

use mosaic::mosaic as module;

fn with_module(check: impl FnOnce(Python<'_>, &Bound<'_, PyDict>)) {
    pyo3::append_to_inittab!(module);
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(c"import mosaic", Some(&globals), None).unwrap();
        check(py, &globals);
    });
}

fn eval(py: Python<'_>, g: &Bound<'_, PyDict>, code: &str) -> f64 {
    let code = std::ffi::CString::new(code).unwrap();
    py.eval(&code, Some(g), None).unwrap().extract().unwrap()
}

#[test]
fn module_round_trip() {
    with_module(|py, g| {
        let w5 = 3.0 / 2f64.powf(1.0 / 6.0);
        assert!((eval(py, g, "mosaic.classify_optimal(1.0, 1.0)['value']") - w5).abs() < 1e-12);
        assert_eq!(eval(py, g, "mosaic.Zonotope.from_parameters([1.0] * 6).combinatorial_type()"), 5.0);
        assert_eq!(eval(py, g, "float(mosaic.Zonotope.shape('cube').counts() == (8, 12, 6))"), 1.0);
        let v = eval(py, g, "mosaic.Zonotope.from_parameters([1, 0.5, 0.2, 0.7, 0.4, 0.9]).volume()");
        let f = eval(py, g, "mosaic.volume_f([1, 0.5, 0.2, 0.7, 0.4, 0.9])");
        assert!((v - f).abs() < 1e-12 * f);
        assert!((eval(py, g, "mosaic.minimize_density(3)['value']") - 3f64.sqrt() * 1.5).abs() < 1e-12);
        assert_eq!(eval(py, g, "float(mosaic.run_cli(['frobnicate'])[0])"), 2.0);
        let code = c"try:\n    mosaic.type_minimum(7, 1.0, 1.0)\n    ok = False\nexcept ValueError:\n    ok = True\n";
        py.run(code, Some(g), None).unwrap();
        assert!(g.get_item("ok").unwrap().unwrap().extract::<bool>().unwrap());
    });
}
