import os
import sys
import json
import time
import argparse
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Optional

import humanize
import pandas as pd
from dotenv import load_dotenv
from tqdm import tqdm

# if file is called directly, must set import paths to project root
if __name__ == '__main__':
    import pathlib
    PROJECT_ROOT = pathlib.Path(__file__).parent.parent.absolute()
    if sys.path[0] != str(PROJECT_ROOT): sys.path.insert(0, str(PROJECT_ROOT))

from src.algebra.dynamics import BdsSpec, check_condition_L
from src.graphs.adapter import GraphSpec, boundary_construction, graph_condition_k, vertex_construction
from src.ideals.condition_k import corner_obstructions, decide_k_direct, decide_k_via_quotients, decide_strong_k
from src.ideals.prim_space import build_tail_space, ideal_lattice, lattice_dot, prim_report, tail_space_dot, write_dot
from src.ideals.tails import ENUMERATION_LIMIT, enumerate_hs_ideals, enumerate_maximal_tails
from src.utils.documents import digest, is_graph_document, parse_bds, parse_graph, serialize_bds, serialize_graph
from src.utils.errors import BdsError, DisagreementError, SizeLimitError, ValidationError
from src.utils.random_specs import random_exit_free_graph, random_graph, random_spec, spawn_rngs

COMMANDS = ('check-l', 'check-k', 'strong-k', 'tails', 'ideals', 'prim', 'lattice', 'from-graph', 'oracle-compare')

EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_INPUT_ERROR = 2
EXIT_SIZE_LIMIT = 3
EXIT_DISAGREEMENT = 4

EXIT_CODES_HELP = f'''exit codes:
  {EXIT_OK}  success, the property holds
  {EXIT_PROPERTY_FAILS}  success, the property fails (see the report)
  {EXIT_INPUT_ERROR}  input error (schema, unknown id, non-functional map, infinite boundary)
  {EXIT_SIZE_LIMIT}  size limit: enumerative commands accept at most {ENUMERATION_LIMIT} atoms
  {EXIT_DISAGREEMENT}  internal disagreement between independent deciders (a bug)
'''


def argparse_init(parser=None):
    if parser is None:
        parser = argparse.ArgumentParser(description='Decide Condition (L) and Condition (K) for finite Boolean dynamical systems',
                                         epilog=EXIT_CODES_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)

    # INPUT #
    inputs = parser.add_argument_group(title='Input', description=None)
    inputs.add_argument('command', choices=COMMANDS)
    inputs.add_argument('input', nargs='?', help='A BDS JSON document, or a Graph JSON document for "from-graph". Optional for "oracle-compare"')
    inputs.add_argument('--construction', default='vertex', choices=('vertex', 'boundary'), help='from-graph: which graph construction to use. Default is "vertex"')

    # RANDOMIZED SUITE #
    suite = parser.add_argument_group(title='Randomized Suite', description='oracle-compare without an INPUT')
    suite.add_argument('--count', default=500, type=int, help='Number of random systems. Default is 500')
    suite.add_argument('--graphs', nargs='?', default=0, const=300, type=int, metavar='COUNT',
        help='Also compare the graph constructions on COUNT random graphs. Const is 300')
    suite.add_argument('--seed', type=int, help='Seed for the random suites. Default is $BDS_SEED, else 0')
    suite.add_argument('--jobs', default=1, type=int, metavar='N', help='Shard the random suites over N processes. Default is 1')

    # OUTPUT #
    output = parser.add_argument_group(title='Output', description=None)
    output.add_argument('--format', default='text', choices=('text', 'json'), help='Report rendering. Default is "text"')
    output.add_argument('--dot', metavar='PATH', help='tails/prim: write the tail space, lattice/ideals: write the Hasse diagram, as DOT')
    output.add_argument('--output', metavar='PATH', help='from-graph: write the constructed system as BDS JSON')
    output.add_argument('--timing', action='store_true', help='Add wall-clock timing to the report (reports are then no longer byte-identical)')
    output.add_argument('--quiet', action='store_true', help='No progress bars')

    # UTILITIES #
    parser.add_argument('--env', metavar='FILE', nargs='?', const=True, help='Environment Variables file. If set but not specified, attempts to find a parent .env file')

    return parser


def argparse_runtime_args(args):
    if args.env:
        load_dotenv(override=True) if args.env is True else load_dotenv(args.env, override=True)

    if args.seed is None:
        args.seed = int(os.environ.get('BDS_SEED', 0))

    if args.format == 'json':
        args.quiet = True

    if args.jobs < 1:
        args.jobs = 1


@dataclass
class VerdictReport:
    command: str
    input_digest: Optional[str]
    verdict: str
    payload: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # name -> list of row dicts
    annotations: list = field(default_factory=list)
    timing: Optional[str] = None

    def to_dict(self) -> dict:
        d = dict(command=self.command, input_digest=self.input_digest, verdict=self.verdict,
                 payload=self.payload, tables=self.tables, annotations=self.annotations)
        if self.timing is not None:
            d['timing'] = self.timing
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + '\n'

    def to_text(self) -> str:
        lines = [f'COMMAND: {self.command}']
        if self.input_digest:
            lines.append(f'INPUT: sha256:{self.input_digest}')
        lines.append(self.verdict)
        for key, value in self.payload.items():
            lines.append(f'{key}: {value}')
        for name, rows in self.tables.items():
            lines.append('')
            lines.append(f'{name.upper()}:')
            lines.append(pd.DataFrame(rows).to_string(index=False) if rows else '  (none)')
        if self.annotations:
            lines.append('')
            lines.append('ANNOTATIONS:')
            lines += [f'  - {note}' for note in self.annotations]
        if self.timing is not None:
            lines.append(f'TIMING: {self.timing}')
        return '\n'.join(lines) + '\n'


def yes_no(flag: bool) -> str:
    return 'YES' if flag else 'NO'


def load_input(path: str, graph: bool = False):
    if not path:
        raise ValidationError('An INPUT document is required')
    with open(path) as f:
        text = f.read()
    if graph != is_graph_document(text):
        raise ValidationError(f'"{path}" is not a {"Graph" if graph else "BDS"} JSON document')
    if graph:
        e_graph = parse_graph(text)
        return e_graph, digest(serialize_graph(e_graph))
    spec = parse_bds(text)
    return spec, digest(serialize_bds(spec))


def witness_row(spec: BdsSpec, witness) -> dict:
    return dict(word=str(witness.word), atom=witness.atom.id, base=spec.render(witness.base),
                tail_support=spec.render(witness.tail_support), corner_n=witness.corner_n)


def decide_k_checked(spec: BdsSpec):
    """ decide_k_direct, cross-checked against the quotient decider when the size allows """
    direct = decide_k_direct(spec)
    if spec.size <= ENUMERATION_LIMIT:
        via = decide_k_via_quotients(spec)
        if via.satisfied != direct.satisfied:
            raise DisagreementError(f'decide_k_direct says {direct.satisfied}, decide_k_via_quotients says {via.satisfied}')
    return direct


def cmd_check_l(spec: BdsSpec, args):
    result = check_condition_L(spec)
    rows = []
    if result.witness:
        rows.append(dict(word=str(result.witness.word), base=spec.render(result.witness.base),
                         status=result.witness.status.value))
    report = VerdictReport('check-l', None, f'Condition (L): {yes_no(result.holds)}', tables={'witness': rows})
    return report, EXIT_OK if result.holds else EXIT_PROPERTY_FAILS


def cmd_check_k(spec: BdsSpec, args):
    verdict = decide_k_checked(spec)
    rows = [witness_row(spec, verdict.witness)] if verdict.witness else []
    payload = dict(method=verdict.method,
                   cross_checked=spec.size <= ENUMERATION_LIMIT)
    report = VerdictReport('check-k', None, f'Condition (K): {yes_no(verdict.satisfied)}', payload,
                           {'witness': rows}, list(verdict.annotations))
    return report, EXIT_OK if verdict.satisfied else EXIT_PROPERTY_FAILS


def cmd_strong_k(spec: BdsSpec, args):
    strong = decide_strong_k(spec)
    k = decide_k_direct(spec).satisfied
    if strong and not k:
        raise DisagreementError('Strong Condition (K) holds but Condition (K) fails')
    report = VerdictReport('strong-k', None, f'Strong Condition (K): {yes_no(strong)}', {'condition_k': yes_no(k)})
    return report, EXIT_OK if strong else EXIT_PROPERTY_FAILS


def _tail_rows(spec: BdsSpec, tails: list) -> list:
    rows = []
    for tail in tails:
        witness = tail.cyclic_witness
        rows.append(dict(support=spec.render(tail.support), complement=spec.render(tail.complement),
                         cyclic=tail.cyclic, word=str(witness.word) if witness else '',
                         atom=witness.atom.id if witness else ''))
    return rows


def cmd_tails(spec: BdsSpec, args):
    tails = enumerate_maximal_tails(spec)
    corners = [dict(tail_support=spec.render(c.tail_support), b=spec.render(c.b), n=c.n)
               for c in corner_obstructions(spec)]
    if args.dot:
        write_dot(tail_space_dot(build_tail_space(spec)), args.dot)
    cyclic = sum(tail.cyclic for tail in tails)
    report = VerdictReport('tails', None, f'Maximal tails: {len(tails)} ({cyclic} cyclic)',
                           tables={'tails': _tail_rows(spec, tails), 'corner obstructions': corners})
    return report, EXIT_OK


def cmd_ideals(spec: BdsSpec, args):
    ideals = enumerate_hs_ideals(spec)
    rows = [dict(H=spec.render(ideal.atom_set), proper=ideal.proper) for ideal in ideals]
    if args.dot:
        write_dot(lattice_dot(ideal_lattice(spec)), args.dot)
    report = VerdictReport('ideals', None, f'Hereditary saturated ideals: {len(ideals)}', tables={'ideals': rows})
    return report, EXIT_OK


def cmd_lattice(spec: BdsSpec, args):
    lattice = ideal_lattice(spec)
    if not lattice.is_lattice():
        raise DisagreementError('Hereditary saturated ideals are not closed under meet and join')
    nodes = [spec.render(ideal.atom_set) for ideal in lattice.elements]
    rows = [dict(H=node, proper=ideal.proper, prime=prime)
            for node, ideal, prime in zip(nodes, lattice.elements, lattice.prime_flags)]
    covers = [dict(lower=nodes[i], upper=nodes[j]) for i, j in lattice.covers]
    if args.dot:
        write_dot(lattice_dot(lattice), args.dot)
    report = VerdictReport('lattice', None, f'Ideal lattice: {lattice.label}',
                           {'elements': len(rows), 'pairs_checked': len(lattice.check_pairs())},
                           {'ideals': rows, 'covers': covers})
    return report, EXIT_OK


def cmd_prim(spec: BdsSpec, args):
    report = prim_report(spec)
    if not report.order_check:
        raise DisagreementError('Closure order and ideal inclusion disagree')
    rows = [dict(tail=spec.render(entry.tail.support), ideal=f'I_{spec.render(entry.ideal.atom_set)}',
                 cyclic=entry.tail.cyclic) for entry in report.entries]
    if args.dot:
        write_dot(tail_space_dot(build_tail_space(spec)), args.dot)
    payload = dict(condition_k=yes_no(report.condition_k), order_check='passed')
    if report.warning:
        payload['warning'] = report.warning
    verdict = VerdictReport('prim', None, f'Primitive ideal space: {len(rows)} points', payload, {'primitive ideals': rows})
    return verdict, EXIT_OK


def cmd_from_graph(e_graph: GraphSpec, args):
    spec = vertex_construction(e_graph) if args.construction == 'vertex' else boundary_construction(e_graph)
    if args.output:
        with open(args.output, 'w') as f:
            f.write(serialize_bds(spec))
    graph_k = graph_condition_k(e_graph)
    verdict = decide_k_checked(spec)
    if graph_k != verdict.satisfied:
        raise DisagreementError(f'Graph Condition (K) is {graph_k} but the {args.construction} construction gives {verdict.satisfied}')
    rows = [witness_row(spec, verdict.witness)] if verdict.witness else []
    payload = dict(construction=args.construction, atoms=spec.size, labels=len(spec.labels),
                   graph_condition_k=yes_no(graph_k), bds_condition_k=yes_no(verdict.satisfied))
    report = VerdictReport('from-graph', None, f'Condition (K): {yes_no(verdict.satisfied)}', payload,
                           {'witness': rows}, list(verdict.annotations))
    return report, EXIT_OK if verdict.satisfied else EXIT_PROPERTY_FAILS


def compare_deciders(spec: BdsSpec) -> Optional[str]:
    """ None when decide_k_direct, decide_k_via_quotients, the cyclic tails and strong K agree """
    direct = decide_k_direct(spec).satisfied
    via = decide_k_via_quotients(spec).satisfied
    no_cyclic_tails = not any(tail.cyclic for tail in enumerate_maximal_tails(spec))
    if not direct == via == no_cyclic_tails:
        return f'{serialize_bds(spec)!r}: direct={direct} via_quotients={via} no_cyclic_tails={no_cyclic_tails}'
    if decide_strong_k(spec) and not direct:
        return f'{serialize_bds(spec)!r}: strong K without K'
    return None


def compare_graph(e_graph: GraphSpec, boundary: bool = False) -> Optional[str]:
    spec = boundary_construction(e_graph) if boundary else vertex_construction(e_graph)
    graph_k, bds_k = graph_condition_k(e_graph), decide_k_direct(spec).satisfied
    if graph_k != bds_k:
        construction = 'boundary' if boundary else 'vertex'
        return f'{serialize_graph(e_graph)!r}: graph={graph_k} {construction}={bds_k}'
    return None


def spec_shard(seed: int, shard: int, shards: int, count: int, desc: Optional[str] = None) -> tuple:
    rng = spawn_rngs(seed, shards)[shard]
    mismatches, failing = [], 0
    for _ in tqdm(range(count), desc=desc, disable=desc is None):
        spec = random_spec(rng)
        mismatch = compare_deciders(spec)
        if mismatch:
            mismatches.append(mismatch)
        failing += not decide_k_direct(spec).satisfied
    return mismatches, failing


def graph_shard(seed: int, shard: int, shards: int, count: int, desc: Optional[str] = None) -> tuple:
    rng = spawn_rngs(seed + 1, shards)[shard]
    mismatches, failing = [], 0
    for _ in tqdm(range(count), desc=desc, disable=desc is None):
        e_graph = random_graph(rng)
        mismatch = compare_graph(e_graph)
        exit_free = random_exit_free_graph(rng)
        mismatch = mismatch or compare_graph(exit_free, boundary=True)
        if mismatch:
            mismatches.append(mismatch)
        failing += not graph_condition_k(e_graph)
    return mismatches, failing


def shard_sizes(count: int, shards: int) -> list:
    return [count // shards + (i < count % shards) for i in range(shards)]


def run_suite(worker, count: int, args, desc: str) -> tuple:
    sizes = shard_sizes(count, args.jobs)
    results = [None] * args.jobs
    if args.jobs == 1:
        results[0] = worker(args.seed, 0, 1, count, desc=None if args.quiet else desc)
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = {pool.submit(worker, args.seed, i, args.jobs, size): i for i, size in enumerate(sizes)}
            for future in tqdm(as_completed(futures), total=len(futures), desc=desc, disable=args.quiet):
                results[futures[future]] = future.result()
    mismatches = [m for shard_mismatches, _ in results for m in shard_mismatches]
    return mismatches, sum(failing for _, failing in results)


def cmd_oracle_compare(spec: Optional[BdsSpec], args):
    if spec is not None:
        mismatch = compare_deciders(spec)
        if mismatch:
            raise DisagreementError(mismatch)
        return VerdictReport('oracle-compare', None, 'all deciders agree',
                             {'condition_k': yes_no(decide_k_direct(spec).satisfied)}), EXIT_OK

    if not args.quiet:
        print(f'SEED: {args.seed}')
    mismatches, failing = run_suite(spec_shard, args.count, args, 'systems')
    payload = dict(seed=args.seed, jobs=args.jobs, systems=args.count, systems_failing_k=failing)
    if args.graphs:
        graph_mismatches, graphs_failing = run_suite(graph_shard, args.graphs, args, 'graphs')
        mismatches += graph_mismatches
        payload.update(graphs=args.graphs, graphs_failing_k=graphs_failing)
    if mismatches:
        raise DisagreementError(f'{len(mismatches)} disagreements, first: {mismatches[0]}')
    return VerdictReport('oracle-compare', None, 'all deciders agree', payload), EXIT_OK


HANDLERS = {
    'check-l': cmd_check_l,
    'check-k': cmd_check_k,
    'strong-k': cmd_strong_k,
    'tails': cmd_tails,
    'ideals': cmd_ideals,
    'prim': cmd_prim,
    'lattice': cmd_lattice,
    'from-graph': cmd_from_graph,
    'oracle-compare': cmd_oracle_compare,
}


def run_command(name: str, args) -> tuple:
    """ Returns (VerdictReport, exit code); domain errors propagate """
    if name not in HANDLERS:
        raise ValidationError(f'Command "{name}" UNKNOWN')
    start = time.perf_counter()
    if name == 'oracle-compare' and not args.input:
        loaded, input_digest = None, None
    else:
        loaded, input_digest = load_input(args.input, graph=name == 'from-graph')
    report, code = HANDLERS[name](loaded, args)
    report.input_digest = input_digest
    if args.timing:
        report.timing = humanize.precisedelta(time.perf_counter() - start, minimum_unit='milliseconds')
    return report, code


def main(args) -> int:
    try:
        report, code = run_command(args.command, args)
    except DisagreementError as e:
        print(f'INTERNAL DISAGREEMENT: {e}', file=sys.stderr)
        return EXIT_DISAGREEMENT
    except SizeLimitError as e:
        print(f'SIZE LIMIT: {e}', file=sys.stderr)
        return EXIT_SIZE_LIMIT
    except (BdsError, OSError) as e:
        print(f'INPUT ERROR: {e}', file=sys.stderr)
        return EXIT_INPUT_ERROR

    print(report.to_json() if args.format == 'json' else report.to_text(), end='')
    return code


if __name__ == '__main__':
    parser = argparse_init()
    args = parser.parse_args()
    argparse_runtime_args(args)
    sys.exit(main(args))
