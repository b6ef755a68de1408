pub mod arith;
pub mod blowup;
pub mod bounds;
pub mod cyclic;
pub mod error;
pub mod families;
pub mod locus;
pub mod nefness;
pub mod pipeline;
pub mod report;
pub mod search;
pub mod tables;
pub mod terminalize;
pub mod wps;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/cyclic.md")]
    pub mod cyclic {}
    #[doc = include_str!("../../../book/src/hypersurfaces.md")]
    pub mod hypersurfaces {}
    #[doc = include_str!("../../../book/src/blowups.md")]
    pub mod blowups {}
    #[doc = include_str!("../../../book/src/terminalization.md")]
    pub mod terminalization {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub mod pipeline {}
    #[doc = include_str!("../../../book/src/families.md")]
    pub mod families {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
