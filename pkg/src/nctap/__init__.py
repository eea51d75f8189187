"""Exact security analysis of coset-coded network coding against tappers
that re-select their links in every time slot."""

from __future__ import annotations

from .adversary import TapSchedule, block_diag, flatten, observe
from .analyzer import CountTable, SecurityVerdict, check_uniform_counts, check_fiber_injectivity, count_table, mutual_information, universal_m_strong_secure
from .attack import AttackWitness, find_witness, reproduce_gf4_example, unit_row_family
from .bounds import RegionQuery, Verdict, classify, cross_validate, region_grid
from .codes import CosetCoder, ParityCheck, coset_encode, gabidulin_parity_check, parity_check, rank_weight, syndrome_decode, verify_mrd
from .gf import FieldElement, FieldSpec, field_build, find_primitive_poly

__all__ = [
    "AttackWitness", "CosetCoder", "CountTable", "FieldElement", "FieldSpec", "ParityCheck", "RegionQuery",
    "SecurityVerdict", "TapSchedule", "Verdict", "block_diag", "check_uniform_counts", "check_fiber_injectivity",
    "classify", "coset_encode", "count_table", "cross_validate", "field_build", "find_primitive_poly",
    "find_witness", "flatten", "gabidulin_parity_check", "mutual_information", "observe", "parity_check",
    "rank_weight", "region_grid", "reproduce_gf4_example", "syndrome_decode", "unit_row_family",
    "universal_m_strong_secure", "verify_mrd",
]
