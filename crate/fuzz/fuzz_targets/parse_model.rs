#![no_main]

use libfuzzer_sys::fuzz_target;

use kripkemv_core::kripke::{build_model, parse_model, render_model};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing and both build modes must never panic.
    let Ok(spec) = parse_model(text) else {
        return;
    };
    let _ = build_model(&spec, false);
    if let Ok(model) = build_model(&spec, true) {
        // A built model renders to text that reproduces it exactly
        // under the strict (already transitively closed) build.
        let rendered = render_model(&model);
        let respec = parse_model(&rendered).expect("rendered model parses");
        let rebuilt = build_model(&respec, false).expect("rendered model builds");
        assert_eq!(rebuilt, model, "round trip changed the model");
    }
});
