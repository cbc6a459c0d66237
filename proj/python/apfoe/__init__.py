"""Frequency-offset estimation for M-QAM: all-phase FFT and two-stage baselines."""

from ._apfoe import (
    DegenerateInput,
    InsufficientSamples,
    ParseError,
    add_awgn,
    apply_carrier,
    apply_phase_noise,
    constellation,
    default_config,
    estimate,
    fourth_moment,
    generate_symbols,
    mul_counts,
    osnr_to_snr,
    samples_required,
    sweep_offsets,
    sweep_osnr,
)

__all__ = [
    "DegenerateInput",
    "InsufficientSamples",
    "ParseError",
    "add_awgn",
    "apply_carrier",
    "apply_phase_noise",
    "constellation",
    "default_config",
    "estimate",
    "fourth_moment",
    "generate_symbols",
    "mul_counts",
    "osnr_to_snr",
    "samples_required",
    "sweep_offsets",
    "sweep_osnr",
]
