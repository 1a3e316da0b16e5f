pub mod bounds;
pub mod ee_scan;
pub mod ie_demo;
pub mod noise_scan;
pub mod smp;
