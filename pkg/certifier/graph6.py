"""graph6 encoding and decoding.

The header byte is 63+n for n <= 62; larger orders use '~' followed by
n in three 6-bit bytes. The payload packs the upper triangle column by
column (x01, x02, x12, x03, ...) six bits per byte, each byte offset by
63, with the final byte zero-padded.

Encoding is canonical for a fixed labelling only; isomorphic graphs
with different labellings encode differently.
"""

from .config import VERTEX_CAP
from .graph import Graph, VertexCapError

GRAPH6_HEADER = b">>graph6<<"

_SHORT_FORM_MAX = 62


class Graph6Error(ValueError):
    pass


class Graph6HeaderError(Graph6Error):
    """Missing, out-of-range or incomplete size header."""


class Graph6CharacterError(Graph6Error):
    """A payload byte outside the printable range 63..126."""


class Graph6TruncatedError(Graph6Error):
    """Fewer payload bytes than n(n-1)/2 bits require."""


class Graph6TrailingDataError(Graph6Error):
    """Bytes after the payload, or nonzero padding bits."""


def _payload_length(n):
    return -(-(n * (n - 1) // 2) // 6)


def _parse_order(data):
    """Return (n, header_length)."""
    if not data:
        raise Graph6HeaderError("empty input")
    first = data[0]
    if not 63 <= first <= 126:
        raise Graph6HeaderError(f"header byte {first} outside 63..126")
    if first < 126:
        return first - 63, 1
    if len(data) < 4:
        raise Graph6HeaderError("extended header needs three size bytes")
    if data[1] == 126:
        raise Graph6HeaderError("orders above 258047 are not supported")
    n = 0
    for byte in data[1:4]:
        if not 63 <= byte <= 126:
            raise Graph6HeaderError(f"size byte {byte} outside 63..126")
        n = (n << 6) | (byte - 63)
    return n, 4


def parse_graph6(text):
    """Decode one graph6 string (bytes or str) into a Graph.

    A leading '>>graph6<<' header and a single trailing newline are
    accepted.
    """
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
    if data.endswith(b"\r\n"):
        data = data[:-2]
    elif data.endswith(b"\n"):
        data = data[:-1]

    n, offset = _parse_order(data)
    if n > VERTEX_CAP:
        raise VertexCapError(f"order {n} exceeds the {VERTEX_CAP}-vertex cap")

    length = _payload_length(n)
    payload = data[offset:offset + length]
    for byte in payload:
        if not 63 <= byte <= 126:
            raise Graph6CharacterError(f"payload byte {byte} outside 63..126")
    if len(payload) < length:
        raise Graph6TruncatedError(
            f"payload has {len(payload)} bytes, order {n} needs {length}")
    if len(data) > offset + length:
        extra = len(data) - offset - length
        raise Graph6TrailingDataError(f"{extra} byte(s) after the payload")

    bits = 0
    for byte in payload:
        bits = (bits << 6) | (byte - 63)
    total = n * (n - 1) // 2
    padding = 6 * length - total
    if bits & ((1 << padding) - 1):
        raise Graph6TrailingDataError("nonzero padding bits")
    bits >>= padding

    rows = [0] * n
    position = total - 1
    for j in range(1, n):
        for i in range(j):
            if bits >> position & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            position -= 1
    return Graph(n, tuple(rows))


def emit_graph6(g):
    """Encode a Graph as graph6 bytes (no header, no newline)."""
    if g.n <= _SHORT_FORM_MAX:
        out = bytearray([63 + g.n])
    else:
        out = bytearray([126] + [63 + (g.n >> shift & 0x3F) for shift in (12, 6, 0)])

    bits = 0
    total = 0
    for j in range(1, g.n):
        column = g.adj[j] & ((1 << j) - 1)
        for i in range(j):
            bits = (bits << 1) | (column >> i & 1)
            total += 1
    length = _payload_length(g.n)
    bits <<= 6 * length - total
    for index in reversed(range(length)):
        out.append(63 + (bits >> (6 * index) & 0x3F))
    return bytes(out)
