from .expr import SystemSyntaxError
from .model import (
    SystemSpec, Perturbation, SystemValidationError, parse_system, print_system,
    standard_quadratic_perturbation, nonlinear_field, read_system_file, build_system,
)
from .catalog import CatalogEntry, CenterConditionError, load_catalog, load_entry, instantiate_center

__all__ = [
    "SystemSyntaxError", "SystemSpec", "Perturbation", "SystemValidationError",
    "parse_system", "print_system", "standard_quadratic_perturbation", "nonlinear_field",
    "read_system_file", "build_system",
    "CatalogEntry", "CenterConditionError", "load_catalog", "load_entry", "instantiate_center",
]
