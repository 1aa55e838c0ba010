"""Plain-text QoS mapping document.

Grammar (one record per line, ``|`` separated, LF line endings)::

    # lteplan qos mapping v1
    [registry]
    mw_queues|<int>
    [transport]
    name|dscp|mw_queue|description
    <row>...
    [qci]
    qci|resource_type|priority|pdb_ms|plr|dscp|mw_queue|service
    <row>...
    [user_class]                      (omitted when there are no classes)
    name|arp|qci|weight|dscp_signaling|dscp_voice|dscp_data
    <row>...

The first line of every table section is its header. QCI rows are ordered
by QCI; floats use the shortest repr that round-trips. Text fields may not
contain ``|`` or line breaks.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from ..errors import InvalidInputError
from .registry import QciRecord, QosRegistry, ResourceType, TransportClass, UserClass

MAGIC = "# lteplan qos mapping v1"
SEP = "|"

TRANSPORT_HEADER = ("name", "dscp", "mw_queue", "description")
QCI_HEADER = ("qci", "resource_type", "priority", "pdb_ms", "plr", "dscp", "mw_queue", "service")
USER_HEADER = ("name", "arp", "qci", "weight", "dscp_signaling", "dscp_voice", "dscp_data")


def _text(value: str) -> str:
    if SEP in value or "\n" in value or "\r" in value:
        raise InvalidInputError(f"text field {value!r} contains a separator or line break")
    return value


def _row(*fields) -> str:
    return SEP.join(_text(f) if isinstance(f, str) else repr(f) for f in fields)


def emit_qos_config(registry: QosRegistry, user_classes: Sequence[UserClass] = ()) -> str:
    lines = [MAGIC, "[registry]", _row("mw_queues", registry.mw_queues), "[transport]",
             SEP.join(TRANSPORT_HEADER)]
    for t in registry.transport_classes:
        lines.append(_row(t.name, t.dscp, t.mw_queue, t.description))
    lines += ["[qci]", SEP.join(QCI_HEADER)]
    for r in sorted(registry.records, key=lambda r: r.qci):
        lines.append(_row(r.qci, ResourceType(r.resource_type).value, r.priority,
                          r.packet_delay_budget_ms, float(r.packet_loss_rate), r.dscp,
                          r.mw_queue, r.service_sample))
    if user_classes:
        lines += ["[user_class]", SEP.join(USER_HEADER)]
        for u in user_classes:
            lines.append(_row(u.name, u.arp, u.qci, u.scheduling_weight, u.dscp_signaling,
                              u.dscp_voice, u.dscp_data))
    return "\n".join(lines) + "\n"


def parse_qos_config(text: str, source: str = "<string>") -> tuple[QosRegistry, list[UserClass]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise InvalidInputError(f"{source}:1: missing header line {MAGIC!r}")
    sections: dict[str, list[tuple[int, list[str]]]] = {}
    current = None
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            if current in sections:
                raise InvalidInputError(f"{source}:{lineno}: duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            raise InvalidInputError(f"{source}:{lineno}: row outside any section")
        else:
            sections[current].append((lineno, line.split(SEP)))
    unknown = set(sections) - {"registry", "transport", "qci", "user_class"}
    if unknown:
        raise InvalidInputError(f"{source}: unknown section(s) {sorted(unknown)}")

    def table(name, header, required=True):
        rows = sections.get(name)
        if rows is None:
            if required:
                raise InvalidInputError(f"{source}: missing section [{name}]")
            return []
        if not rows or tuple(rows[0][1]) != header:
            raise InvalidInputError(f"{source}: section [{name}] must start with header {SEP.join(header)}")
        for lineno, fields in rows[1:]:
            if len(fields) != len(header):
                raise InvalidInputError(
                    f"{source}:{lineno}: expected {len(header)} fields in [{name}], got {len(fields)}")
        return rows[1:]

    def convert(lineno, fn, *args):
        try:
            return fn(*args)
        except (ValueError, TypeError) as exc:
            raise InvalidInputError(f"{source}:{lineno}: {exc}") from None

    mw_queues = None
    for lineno, fields in sections.get("registry", []):
        if len(fields) == 2 and fields[0] == "mw_queues":
            mw_queues = convert(lineno, int, fields[1])
        else:
            raise InvalidInputError(f"{source}:{lineno}: unknown registry entry")
    if mw_queues is None:
        raise InvalidInputError(f"{source}: [registry] must set mw_queues")

    transport = [
        convert(n, lambda f: TransportClass(f[0], int(f[1]), int(f[2]), f[3]), f)
        for n, f in table("transport", TRANSPORT_HEADER)
    ]
    records = [
        convert(n, lambda f: QciRecord(int(f[0]), ResourceType(f[1]), int(f[2]), int(f[3]),
                                       float(f[4]), int(f[5]), int(f[6]), f[7]), f)
        for n, f in table("qci", QCI_HEADER)
    ]
    users = [
        convert(n, lambda f: UserClass(f[0], arp=int(f[1]), qci=int(f[2]),
                                       scheduling_weight=int(f[3]), dscp_signaling=int(f[4]),
                                       dscp_voice=int(f[5]), dscp_data=int(f[6])), f)
        for n, f in table("user_class", USER_HEADER, required=False)
    ]
    registry = convert(0, QosRegistry, tuple(records), tuple(transport), mw_queues)
    return registry, users


def write_qos_config(path, registry: QosRegistry, user_classes: Sequence[UserClass] = ()) -> None:
    path = Path(path)
    try:
        path.write_text(emit_qos_config(registry, user_classes), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write QoS mapping to {path}: {exc.strerror}") from exc


def read_qos_config(path) -> tuple[QosRegistry, list[UserClass]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read QoS mapping from {path}: {exc.strerror}") from exc
    return parse_qos_config(text, source=str(path))
