#![allow(dead_code)]

use std::sync::OnceLock;

use u35_core::context::U35Context;

pub fn ctx() -> &'static U35Context {
    static CTX: OnceLock<U35Context> = OnceLock::new();
    CTX.get_or_init(|| U35Context::build().expect("group construction"))
}
