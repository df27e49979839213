#![no_main]

use delta_kernels::harness::{lookup, lookup_spherical};
use delta_kernels::kernels::Family;
use arbitrary::{Arbitrary, Unstructured};
use libfuzzer_sys::fuzz_target;

#[derive(Debug, Arbitrary)]
struct Query<'a> {
    name: &'a str,
    nu: Option<f64>,
    l: Option<u32>,
    alpha: Option<f64>,
}

fuzz_target!(|data: &[u8]| {
    let Ok(q) = Query::arbitrary(&mut Unstructured::new(data)) else {
        return;
    };
    if let Ok(family) = Family::parse(q.name, q.nu, q.l, q.alpha) {
        assert_eq!(family.name(), q.name);
    }
    if let Some(tf) = lookup(q.name) {
        assert_eq!(tf.id, q.name);
        let _ = tf.one_sided(q.nu.unwrap_or(0.0));
    }
    if let Some(sf) = lookup_spherical(q.name) {
        assert_eq!(sf.id, q.name);
    }
});
