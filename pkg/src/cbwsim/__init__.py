"""Simulator for serially coupled and cavity-recursive Mach-Zehnder interferometers."""

__version__ = "0.1.0"

from .analysis import Curve, Map2D, MetrologyError, fringe_count, fwhm, map_phi_psi, sweep_phi, visibility
from .cavity import AiryParams, CavityParams, airy_transmission, cavity_field_sum, cavity_spectrum, spectral_width_ratio
from .netlist import CircuitSpec, BlockDecl, NetlistError, parse_netlist, render_netlist
from .optics import (
    BlockParams,
    Coupling,
    FieldPair,
    acd_block,
    apply,
    bs_matrix,
    chain_closed_form,
    chain_product,
    intensities,
    mzi_matrix,
    phase_matrix,
)
from .phase_basis import cbw_wavelength, fringe_extrema, order_histogram, pbw_wavelength, tensor_expand
