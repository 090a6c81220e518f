"""Secure network coding over GF(2^m): secrecy against wiretaps, a secret
bit that survives jamming, shared-secret error control and their
composition into a code that is both secret and reliable."""

from .channel import CodeParams, transmit
from .fields import ExtField, BaseField, extension, field_for_order, gf2m
from .full_scheme import FullCodeLayout, full_decode, full_encode, rate_report
from .linalg import Matrix
from .rank_codes import build_codebook
from .secret_bit import bit_decode, bit_encode

__version__ = "0.1.0"

__all__ = [
    "BaseField", "CodeParams", "ExtField", "FullCodeLayout", "Matrix", "bit_decode", "bit_encode",
    "build_codebook", "extension", "field_for_order", "full_decode", "full_encode", "gf2m",
    "rate_report", "transmit",
]
