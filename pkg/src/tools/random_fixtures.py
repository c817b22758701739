import os
import argparse

from tqdm import tqdm

# if file is called directly, must set import paths to project root
if __name__ == '__main__':
    import sys, pathlib
    PROJECT_ROOT = pathlib.Path(__file__).parent.parent.parent.absolute()
    if sys.path[0] != str(PROJECT_ROOT): sys.path.insert(0, str(PROJECT_ROOT))

from src.utils.documents import serialize_bds, serialize_graph
from src.utils.random_specs import random_exit_free_graph, random_graph, random_spec, spawn_rngs


def argparse_init():
    parser = argparse.ArgumentParser(description='Write seeded random BDS / Graph JSON documents for manual exploration')
    parser.add_argument('--name', metavar='PREFIX', default='random', help='Output files are named PREFIX_NNN.json')
    parser.add_argument('--kind', default='bds', choices=('bds', 'graph', 'exit-free-graph'))
    parser.add_argument('--count', type=int, default=10)
    parser.add_argument('--seed', type=int, default=0, help='Set a specific seed for deterministic reproducability. Default is 0')
    parser.add_argument('--max-atoms', metavar='N', type=int, default=6, help='Atoms (or vertices) per document. Default is 6')
    parser.add_argument('--max-labels', metavar='N', type=int, default=3, help='bds: labels per document. Default is 3')
    parser.add_argument('--max-edges', metavar='N', type=int, default=10, help='graph: edges per document. Default is 10')

    out = parser.add_argument_group(title='Output Options')
    out.add_argument('--outdir', default='.')
    return parser


def generate(args) -> list:
    """ (filename, document text) pairs """
    rng, = spawn_rngs(args.seed, 1)
    documents = []
    for i in range(args.count):
        if args.kind == 'bds':
            text = serialize_bds(random_spec(rng, args.max_atoms, args.max_labels))
        elif args.kind == 'graph':
            text = serialize_graph(random_graph(rng, args.max_atoms, args.max_edges))
        else:
            text = serialize_graph(random_exit_free_graph(rng, args.max_atoms))
        documents.append((f'{args.name}_{i:03}.json', text))
    return documents


def main(args):
    os.makedirs(args.outdir, exist_ok=True)
    for filename, text in tqdm(generate(args), desc=args.kind):
        with open(os.path.join(args.outdir, filename), 'w') as f:
            f.write(text)
    print(f'{args.count} documents written to {args.outdir}')


if __name__ == '__main__':
    parser = argparse_init()
    args = parser.parse_args()
    main(args)
