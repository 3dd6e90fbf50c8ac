"""End-to-end DAG-path graph flattening for LLM prompts, with baselines and an
edge-prediction benchmark harness."""
from .compress import CompressedPathTree, compress, expand, render
from .dag import Dag, EndpointSet, build_eedp_dag, endpoints, is_acyclic
from .flatten import FlattenedGraph, FlattenOptions, Method, flatten, flatten_eedp
from .graph import Graph, all_simple_paths, from_arcs, reachable, shortest_distance
from .paths import PathBundle, PathLimits, classify_dag_paths, extract_paths

__version__ = "0.1.0"
