"""Positional HTML scanning for img/video tags.

Built on the stdlib tolerant tokenizer so annotation can splice attributes
into the original text without disturbing any other byte of the page.
"""

from __future__ import annotations

from dataclasses import dataclass
from html.parser import HTMLParser

from .errors import UnparsableHtmlError

MEDIA_TAGS = ("img", "video")
CERT_ATTR = "x-media-cert"


@dataclass
class MediaTag:
    name: str
    attrs: dict[str, str]
    offset: int  # byte offset of "<" in the source text
    raw: str  # original start-tag text


class _MediaTagScanner(HTMLParser):
    def __init__(self, line_offsets: list[int]):
        super().__init__(convert_charrefs=False)
        self._line_offsets = line_offsets
        self.tags: list[MediaTag] = []

    def _record(self, name: str, attrs) -> None:
        if name not in MEDIA_TAGS:
            return
        line, col = self.getpos()
        offset = self._line_offsets[line - 1] + col
        attr_map = {key: (value if value is not None else "") for key, value in attrs}
        self.tags.append(MediaTag(name, attr_map, offset, self.get_starttag_text() or ""))

    def handle_starttag(self, tag, attrs):
        self._record(tag, attrs)

    def handle_startendtag(self, tag, attrs):
        self._record(tag, attrs)


def scan_media_tags(page: str) -> list[MediaTag]:
    """Return img/video start tags in document order with source offsets."""
    line_offsets = [0]
    for idx, ch in enumerate(page):
        if ch == "\n":
            line_offsets.append(idx + 1)
    scanner = _MediaTagScanner(line_offsets)
    try:
        scanner.feed(page)
        scanner.close()
    except Exception as exc:
        raise UnparsableHtmlError(f"could not tokenize page: {exc}") from exc
    return scanner.tags
