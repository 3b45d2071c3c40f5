"""Wavepacket superpositions under Aharonov-Bohm phase programs.

Exact piecewise wavefunctions, momentum-space closed forms with FFT
oracles, modular momentum, and free propagation.
"""
from .errors import AliasingError, DivergentMomentError, ResolutionError
from .evolution import (PropagationSpec, free_evolve, overlap_fraction, overlap_time,
                        position_density, split_at)
from .spectral import (DensityCurve, ModularSample, analytic_density_boosted_tophat,
                       analytic_density_single, analytic_density_two_packet, band_mass,
                       boosted_overlap_closed_form, density_curve, fft_momentum_amplitude,
                       fft_momentum_density, l1_distance, modular_expectation, moment,
                       momentum_amplitude, momentum_density, overlap, peak_location, sinc,
                       sinc2_mass, two_packet_amplitude)
from .wavefunctions import (Grid, PhaseProgram, PiecewiseWave, SampledWave, Segment,
                            aligned_step, apply_phase_program, comb_geometry, evaluate,
                            gaussian, grid_for, make_boosted_tophat, make_comb, make_tophat,
                            make_two_packet, raised_cosine_step, sample, smooth_edges)

__version__ = "0.1.0"
