import sys, pathlib

if __name__ == '__main__':
    PROJECT_ROOT = pathlib.Path(__file__).parent.absolute()
    if sys.path[0] != str(PROJECT_ROOT): sys.path.insert(0, str(PROJECT_ROOT))
    from src.cli import argparse_init, argparse_runtime_args, main
    parser = argparse_init()
    args = parser.parse_args()
    argparse_runtime_args(args)
    sys.exit(main(args))
