"""Command-line front end."""

from .main import build_parser, main, run_command
from .parser import (Cyclic, DirectProduct, Family, Named, SemidirectPQ, SpecSyntaxError, build_group,
                     group_from_text, parse_group_spec, print_group_spec)
