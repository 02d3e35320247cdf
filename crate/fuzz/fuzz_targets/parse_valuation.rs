#![no_main]

use libfuzzer_sys::fuzz_target;

use kripkemv_core::catalog::FrameCatalog;
use kripkemv_core::values::{parse_valuation, render_valuation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let catalog = FrameCatalog::new();
    // Must never panic; on success, rendering must round-trip.
    if let Ok(valuation) = parse_valuation(&catalog, text) {
        let rendered = render_valuation(&valuation);
        let reparsed = parse_valuation(&catalog, &rendered).expect("rendered valuation parses");
        assert_eq!(reparsed, valuation, "round trip changed the valuation");
    }
});
