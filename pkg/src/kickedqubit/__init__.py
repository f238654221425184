"""Pulsed two-state quantum dynamics: closed-form propagators, a fixed-step
RK4 integrator, and diagnostics for the size of time-ordering effects."""

from . import analysis, evolve, propagators, pulses, su2, validation

__version__ = "0.1.0"

__all__ = ["analysis", "evolve", "propagators", "pulses", "su2", "validation", "__version__"]
