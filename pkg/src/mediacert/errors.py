"""Exception types shared across the toolkit.

File-system problems use the builtin FileNotFoundError / OSError; everything
domain-specific derives from MediaCertError so callers can catch one base.
"""


class MediaCertError(Exception):
    """Base class for all mediacert errors."""


class InvalidKeyError(MediaCertError):
    """Private key material is undecodable, not RSA, or below 2048 bits."""


class MalformedCertificateError(MediaCertError):
    """Certificate bytes are not a decodable X.509 cert with an RSA key."""


class MalformedSidecarError(MediaCertError):
    """Sidecar text is not well-formed or lacks a required element."""


class EmptyMediaError(MediaCertError):
    """Chunked signing was asked to sign a zero-length asset."""


class UnparsableHtmlError(MediaCertError):
    """The HTML page could not be tokenized."""


class PageUnreachableError(MediaCertError):
    """The page to crawl could not be fetched or read."""


class StreamTruncatedError(MediaCertError):
    """A chunked stream ended before the manifest's final chunk."""


class BindFailureError(MediaCertError):
    """The demo server could not bind its address."""
