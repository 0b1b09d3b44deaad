"""
extract: receiver holding only the data hiding key
"""
import argparse

from models.commands import CommandConfig
from services.pipeline_service import pipeline_service


def register(subparsers):
    parser = subparsers.add_parser("extract", help="Extract the payload with the data hiding key")
    parser.add_argument("input", help="PGM image carrying a payload")
    parser.add_argument("output", help="Extracted payload file")
    parser.add_argument("--key-w", required=True, help="Data hiding key (hex)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = CommandConfig(command="extract", input_path=args.input, output_path=args.output, key_w=args.key_w)
    bit_length = pipeline_service.extract(config.input_path, config.output_path, config.hiding_key)
    print(f"Extracted {bit_length} bits")
    return 0
