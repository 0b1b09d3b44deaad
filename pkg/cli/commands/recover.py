"""
recover: receiver holding only the encryption key
"""
import argparse

from config.settings import settings
from models.commands import CommandConfig
from services.pipeline_service import pipeline_service


def register(subparsers):
    parser = subparsers.add_parser("recover", help="Recover the original image with the encryption key")
    parser.add_argument("input", help="Marked encrypted PGM image")
    parser.add_argument("output", help="Recovered PGM image")
    parser.add_argument("--key-e", required=True, help="Encryption key (hex)")
    parser.add_argument("--original", help="Reference image for PSNR/SSIM")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = CommandConfig(
        command="recover",
        input_path=args.input,
        output_path=args.output,
        key_e=args.key_e,
        original_path=args.original,
    )
    quality = pipeline_service.recover(config.input_path, config.output_path, config.encryption_key,
                                       original_path=config.original_path)
    if quality is not None:
        print(quality.to_line(settings.report_decimals))
    return 0
