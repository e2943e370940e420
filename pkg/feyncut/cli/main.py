"""Command-line interface for feyncut."""

import argparse
import json
import sys
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from ..config.settings import Config
from ..core.algebra import _underlying
from ..core.checks import CheckReport, check_spanning_tree_counting, run_hopf_checks
from ..core.cointeraction import (
    Context,
    all_monomials,
    check_cointeraction,
    check_lem_cGT,
    check_random_contexts,
    galois_conjugates,
    galois_pairing,
    generator_table,
)
from ..core.coproducts import Antipode, get_coproduct
from ..core.cut_matrix import cut_matrix, cut_matrix_green
from ..core.cutgraph import GraphForestPair, PreCutGraph
from ..core.dse import (
    check_coprod_green,
    check_graphins,
    check_primitive_decomposition,
    green_series,
)
from ..core.errors import GraphError
from ..core.forests import kirchhoff_spt, spanning_forests, spt, spt_bold
from ..core.graph import Graph
from ..core.necklace import format_pi_omega, necklaces, necklaces_cut
from ..core.symanzik import (
    check_symanzik,
    factorization_check,
    phi,
    psi,
    renorm_integrand,
    sector_report,
)
from ..utils.file_utils import ResultsExporter, load_graph_file
from ..utils.visualization import GraphDrawer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3


def setup_logging(verbose: bool = False, log_file: Optional[str] = "feyncut.log"):
    """Setup logging configuration; stdout stays reserved for results."""
    level = logging.DEBUG if verbose else logging.INFO
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def _edge_list(text: Optional[str]) -> List[str]:
    return [e.strip() for e in text.split(',') if e.strip()] if text else []


def _int_list(text: str) -> List[int]:
    return [int(p) for p in text.split(',') if p.strip()]


def _assignments(text: Optional[str]) -> Dict[str, str]:
    """Parse 'a=b,c=d' pairs."""
    result = {}
    for item in _edge_list(text):
        if '=' not in item:
            raise argparse.ArgumentTypeError(f"Expected key=value, got {item!r}")
        key, value = item.split('=', 1)
        result[key.strip()] = value.strip()
    return result


def _load(args: argparse.Namespace) -> Union[Graph, PreCutGraph]:
    if not getattr(args, 'graph', None):
        raise argparse.ArgumentTypeError("--graph FILE is required")
    return load_graph_file(args.graph)


def _load_plain(args: argparse.Namespace) -> Graph:
    return _underlying(_load(args))


def _massless(graph: Graph, given: Optional[str], config: Config, loop_edges: Sequence[str]) -> List[str]:
    if given is not None:
        return _edge_list(given)
    return list(loop_edges) if config.massless_default == 'all' else []


def _reports(name: str, reports: Sequence[CheckReport], **extra: Any) -> Dict[str, Any]:
    return {
        'check': name,
        'passed': all(r.passed for r in reports),
        'reports': [r.to_dict() for r in reports],
        **extra,
    }


# ----------------------------------------------------------------------
# subcommands


def run_validate(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    graph = _load(args)
    cut = graph if isinstance(graph, PreCutGraph) else PreCutGraph(graph)
    base = cut.base
    return {
        'valid': True,
        'class': cut.classify(),
        'vertices': base.n_vertices,
        'edges': base.n_edges,
        'legs': base.n_legs,
        'loops': base.loops,
        'bridgeless': base.is_bridgeless(),
        'key': cut.key(labelled=True),
    }


def run_classify(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    graph = _load(args)
    cut = graph if isinstance(graph, PreCutGraph) else PreCutGraph(graph)
    return {
        'class': cut.classify(),
        'normal': cut.is_normal(),
        'loops': cut.loops,
        'norm': cut.norm,
        'compatible_forests': len(cut.compatible_forests()),
    }


def _coproduct_input(args: argparse.Namespace, graph: Union[Graph, PreCutGraph]) -> Any:
    if args.algebra in ('GF', 'GT'):
        tree = _edge_list(args.tree) if args.tree else None
        return GraphForestPair(_underlying(graph), _edge_list(args.forest), tree)
    if args.algebra in ('core', 'N'):
        return _underlying(graph)
    return graph


def run_coprod(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    graph = _load(args)
    coproduct = get_coproduct(
        args.algebra,
        allowed=tuple(_int_list(args.allowed)),
        normal_vertex_cuts=args.normal_cuts or config.normal_vertex_cuts,
    )
    x = _coproduct_input(args, graph)
    tensor = coproduct.reduced(x) if args.reduced else coproduct(x)
    logger.info(f"{coproduct.name} coproduct has {len(tensor)} terms")
    return tensor.to_records()


def run_antipode(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    graph = _load(args)
    coproduct = get_coproduct(
        args.algebra,
        allowed=tuple(_int_list(args.allowed)),
        normal_vertex_cuts=args.normal_cuts or config.normal_vertex_cuts,
    )
    return Antipode(coproduct)(_coproduct_input(args, graph)).to_records()


def run_spt(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    graph = _load_plain(args)
    return {'spt': spt(graph), 'kirchhoff': kirchhoff_spt(graph), 'spt_bold': spt_bold(graph)}


def run_forests(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    graph = _load(args)
    if isinstance(graph, PreCutGraph):
        found = graph.compatible_forests()
    else:
        sizes = [args.k] if args.k else range(graph.h0, graph.n_vertices + 1)
        found = [f for k in sizes for f in spanning_forests(graph, k)]
    return [
        {
            'k': forest.k,
            'edges': sorted(forest.edges),
            'cut': sorted(forest.crossing_edges),
            'legs': [sorted(p) for p in forest.leg_partition()],
        }
        for forest in found
    ]


def run_necklaces(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    if args.partition:
        words = necklaces_cut(_int_list(args.partition))
    else:
        words = necklaces(args.ext)
    return [
        {'word': w.word(), 'length': w.length, 'core': w.is_core(), 'pi_omega': format_pi_omega(w.pi_omega())}
        for w in words
    ]


def run_galois(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    graph = _load_plain(args)
    tree = _edge_list(args.tree)
    loops = [e for e in graph.edges if e not in tree]
    return generator_table(graph, tree, _massless(graph, args.massless_edges, config, loops))


def run_coint_check(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    reports: List[CheckReport] = []
    if args.graph:
        graph = _load_plain(args)
        tree = _edge_list(args.tree)
        loops = [e for e in graph.edges if e not in tree]
        logger.info("Step 1: Building the context of the spanning tree")
        context = Context.from_tree(graph, tree, _massless(graph, args.massless_edges, config, loops))
        logger.info("Step 2: Enumerating incidence monomials")
        sample = all_monomials(context)
        logger.info(f"Step 3: Checking cointeraction identities on {len(sample)} monomials")
        reports.extend(check_cointeraction(context, sample))
        logger.info("Step 4: Checking the graph-tree coaction against the incidence coproduct")
        coaction = CheckReport('graph-tree-coaction')
        for conjugate in galois_conjugates(graph, tree):
            coaction.merge(check_lem_cGT(conjugate.pair))
        reports.append(coaction)
    else:
        count = args.random if args.random is not None else config.random_contexts
        logger.info(f"Step 1: Checking {count} random contexts")
        reports.extend(check_random_contexts(
            count, seed=config.seed, max_tree=config.max_tree_edges, max_loop=config.max_loop_edges
        ))
    return _reports('cointeraction', reports)


def run_pairing(args: argparse.Namespace, config: Config) -> List[Dict[str, Any]]:
    graph = _load_plain(args)
    massless = _edge_list(args.massless_edges) if args.massless_edges else []
    return galois_pairing(graph, massless).to_records()


def run_dse(args: argparse.Namespace, config: Config) -> Any:
    if (args.target is None) == (args.partition is None):
        raise argparse.ArgumentTypeError("Give exactly one of --target N or --partition p1,p2,...")
    target: Union[int, List[int]] = args.target if args.target is not None else _int_list(args.partition)
    loops = args.loops if args.loops is not None else config.default_loops
    degrees = tuple(_int_list(args.degrees)) if args.degrees else config.degrees

    if not args.check:
        logger.info(f"Enumerating the Green function of {target} to {loops} loops")
        return green_series(target, loops, degrees, threads=config.threads).to_records()

    logger.info(f"Step 1: Checking {args.check} for {target} at {loops} loops, degrees {list(degrees)}")
    if args.check == 'graphins':
        report = check_graphins(target, loops, degrees, config.threads)
    elif args.check == 'coprod':
        report = check_coprod_green(target, loops, degrees, threads=config.threads)
    else:
        if isinstance(target, int):
            raise argparse.ArgumentTypeError("--check primitive needs --partition")
        report = check_primitive_decomposition(target, loops, degrees, config.threads)
    logger.info(f"Step 2: {report.name} {'passed' if report.passed else 'failed'} on {report.checked} cases")
    return _reports(f"dse-{args.check}", [report])


def run_matrix(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    if args.graph:
        logger.info("Step 1: Adding zero-momentum legs and listing contraction classes")
        matrix = cut_matrix(_load_plain(args))
    else:
        if args.ext is None:
            raise argparse.ArgumentTypeError("Give --graph FILE or --ext N")
        loops = args.loops if args.loops is not None else config.default_loops
        degrees = tuple(_int_list(args.degrees)) if args.degrees else config.degrees
        logger.info(f"Step 1: Enumerating {args.ext}-point graphs to {loops} loops")
        matrix = cut_matrix_green(args.ext, loops, degrees, config.threads)
    logger.info(f"Step 2: Matrix of size {matrix.size} assembled")
    return {
        'classes': matrix.labels,
        'lower_triangular': matrix.is_lower_triangular(),
        'mask': matrix.mask().tolist(),
        'entries': matrix.to_records(),
    }


def run_symanzik(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    graph = _load_plain(args)
    result: Dict[str, Any] = {'psi': psi(graph).to_records()}
    if args.second:
        masses = _assignments(args.masses) if args.masses else None
        result['phi'] = phi(graph, masses, _assignments(args.momenta)).to_records()
    if args.subgraph:
        report = factorization_check(graph, _edge_list(args.subgraph))
        result.update(_reports('factorization', [report]))
    if args.check:
        result.update(_reports('symanzik', [check_symanzik(graph)]))
    if args.dimension:
        result['integrand'] = renorm_integrand(graph, args.dimension).to_dict()
    return result


def run_sectors(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    return sector_report(_load_plain(args), oracle=args.oracle)


def run_dot(args: argparse.Namespace, config: Config) -> str:
    return GraphDrawer().to_dot(_load(args), save_path=args.save)


def run_hopf_check(args: argparse.Namespace, config: Config) -> Dict[str, Any]:
    graph = _load(args)
    coproduct = get_coproduct(args.algebra, allowed=tuple(_int_list(args.allowed)))
    sample = [_coproduct_input(args, graph)]
    reports = run_hopf_checks(coproduct, sample, antipode=args.algebra in ('core', 'N'))
    if args.algebra == 'core':
        reports.append(check_spanning_tree_counting([_underlying(graph)]))
    return _reports(f"hopf[{coproduct.name}]", reports)


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], Any]] = {
    'validate': run_validate,
    'classify': run_classify,
    'coprod': run_coprod,
    'antipode': run_antipode,
    'spt': run_spt,
    'forests': run_forests,
    'necklaces': run_necklaces,
    'galois': run_galois,
    'coint-check': run_coint_check,
    'pairing': run_pairing,
    'dse': run_dse,
    'matrix': run_matrix,
    'symanzik': run_symanzik,
    'sectors': run_sectors,
    'dot': run_dot,
    'hopf-check': run_hopf_check,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog='feyncut',
        description='Hopf algebras of Feynman graphs with Cutkosky cuts',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Spanning trees of a graph
  feyncut spt --graph dunce.json

  # Core coproduct, reduced
  feyncut coprod --graph dunce.json --algebra core --reduced

  # Galois conjugates of the triangle with the tree e2,e3
  feyncut galois --graph triangle.json --tree e2,e3

  # Graph-insertion identity for the 4-point function at two loops
  feyncut dse --target 4 --loops 2 --degrees 4 --check graphins
        """
    )
    parser.add_argument('--format', choices=['json', 'text'], default=None,
                        help='Output format (default: json)')
    parser.add_argument('--seed', type=int, default=None, help='Seed for property sampling')
    parser.add_argument('--threads', type=int, default=None, help='Worker threads for enumeration')
    parser.add_argument('--log-file', default=None, help='Log file (default: feyncut.log)')
    parser.add_argument('--output-dir', default=None,
                        help='Also write the result to this directory')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')

    sub = parser.add_subparsers(dest='command', required=True)

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--graph', help='Path to a graph file in the JSON graph format')
        return p

    graph_command('validate', 'Validate a graph file')
    graph_command('classify', 'Classify a (pre-)cut graph')

    for name, help_text in (('coprod', 'Coproduct of a graph'), ('antipode', 'Antipode of a graph'),
                            ('hopf-check', 'Check the Hopf algebra axioms on a graph')):
        p = graph_command(name, help_text)
        p.add_argument('--algebra', choices=['core', 'N', 'pC', 'GF', 'GT'], default='core')
        p.add_argument('--allowed', default='1', help='Allowed loop numbers for --algebra N (default: 1)')
        p.add_argument('--forest', default='', help='Forest edges for GF and GT')
        p.add_argument('--tree', default='', help='Spanning tree edges for GT')
        p.add_argument('--normal-cuts', action='store_true', help='Only normal vertex cuts in pC')
        if name == 'coprod':
            p.add_argument('--reduced', action='store_true', help='Drop the primitive terms')

    graph_command('spt', 'Count spanning trees')
    p = graph_command('forests', 'List spanning or compatible forests')
    p.add_argument('--k', type=int, default=None, help='Number of trees')

    p = sub.add_parser('necklaces', help='One-loop necklaces')
    p.add_argument('--ext', type=int, default=4, help='Number of legs for core necklaces')
    p.add_argument('--partition', default=None, help='Cut type such as 1,1')

    for name, help_text in (('galois', 'Galois conjugates with generator tables'),
                            ('coint-check', 'Check the cointeraction identities')):
        p = graph_command(name, help_text)
        p.add_argument('--tree', default='', help='Spanning tree edges such as e2,e3')
        p.add_argument('--massless-edges', default=None, help='Loop edges that may not become tadpoles')
        if name == 'coint-check':
            p.add_argument('--random', type=int, default=None, help='Number of random contexts')

    p = graph_command('pairing', 'Combinatorial Galois pairing')
    p.add_argument('--massless-edges', default=None, help='Edges whose tadpoles vanish; none by default')

    p = sub.add_parser('dse', help='Green functions and their Dyson-Schwinger identities')
    p.add_argument('--target', type=int, default=None, help='Core n-point function')
    p.add_argument('--partition', default=None, help='Cut type such as 1,2')
    p.add_argument('--loops', type=int, default=None)
    p.add_argument('--degrees', default=None, help='Vertex valences such as 3,4')
    p.add_argument('--check', choices=['graphins', 'coprod', 'primitive'], default=None)

    p = graph_command('matrix', 'Cut matrix of a graph or of a Green function')
    p.add_argument('--ext', type=int, default=None)
    p.add_argument('--loops', type=int, default=None)
    p.add_argument('--degrees', default=None)

    p = graph_command('symanzik', 'Symanzik polynomials and integrands')
    p.add_argument('--second', action='store_true', help='Also compute the second polynomial')
    p.add_argument('--masses', default=None, help='Edge masses such as e1=m1,e2=m2')
    p.add_argument('--momenta', default=None, help='Rewrite rules such as s_3=s_12')
    p.add_argument('--subgraph', default=None, help='Edges of a subgraph to factorize along')
    p.add_argument('--dimension', type=int, default=None, help='Build the integrand in this dimension')
    p.add_argument('--check', action='store_true', help='Run the polynomial identity checks')

    p = graph_command('sectors', 'Count renormalization-free sectors')
    p.add_argument('--oracle', action='store_true', help='Also count by walking all edge orders')

    p = graph_command('dot', 'DOT drawing of a graph')
    p.add_argument('--save', default=None, help='Write the DOT file here')
    return parser


def render_text(payload: Any) -> str:
    """Plain-text rendering: one record per line."""
    if isinstance(payload, str):
        return payload
    if isinstance(payload, list):
        return '\n'.join(
            ', '.join(f"{k}={v}" for k, v in row.items()) if isinstance(row, dict) else str(row)
            for row in payload
        )
    if isinstance(payload, dict):
        lines = []
        for key, value in payload.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{key}:")
                lines.extend(f"  {line}" for line in render_text(value).splitlines())
            else:
                lines.append(f"{key}: {value}")
        return '\n'.join(lines)
    return str(payload)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK

    try:
        config = Config.from_env(
            threads=args.threads,
            seed=args.seed,
            output_format=args.format,
            log_file=args.log_file,
        )
    except ValueError as e:
        print(f"Invalid configuration: {e}", file=sys.stderr)
        return EXIT_INVALID

    setup_logging(args.verbose, config.log_file)

    try:
        payload = COMMANDS[args.command](args, config)
    except (GraphError, json.JSONDecodeError, FileNotFoundError, argparse.ArgumentTypeError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID
    except Exception as e:
        logger.error(f"Command {args.command} failed: {str(e)}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILURE

    if config.output_format == 'json' and not isinstance(payload, str):
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(render_text(payload))

    if args.output_dir:
        exporter = ResultsExporter(args.output_dir)
        exporter.export_all({
            args.command.replace('-', '_'): payload,
            'metadata': {'command': args.command, 'config': config.to_dict()},
        })

    if isinstance(payload, dict) and payload.get('passed') is False:
        logger.warning(f"Command {args.command} found a failing identity")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
