pub mod acceptance;
pub mod cohom;
pub mod descent;
pub mod fan;
pub mod fixtures;
pub mod intlin;
pub mod lp;
pub mod realforms;
pub mod simsolve;
pub mod symgrp;
