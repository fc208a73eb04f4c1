"""Headless exploration scripts: parse, execute, golden-compare, record.

A script drives one implicit session through the HTTP handlers (in-process
or over the network — same code path either way). Line format:

    # comment
    dataset social
    create-session {"spec": {...}, "breakpoints": [...]}
    expect {"ok":true,"data":{"session_id":"s1"}}
    continue
    expand {"vertex": 3, "direction": "both"}
    estimate {"vertex": 3, "direction": "both"}
    fetch {"elements": [{"class":"vertex","id":3}], "names": ["firstname"]}
    bookmark {"description": "first find"}
    restore $last
    stop

``expect`` lines hold the exact response body the preceding command must
produce; in golden mode the first divergence fails the run, named by command
index. The replayer mirrors what a visual client would display (matched
vertices, expansion deltas, fetched attributes, restored payloads, merged as
set-union) and materializes that view as the payload whenever the script
bookmarks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import httpx

from .errors import InvalidSpecError

COMMANDS = ("create-session", "continue", "expand", "estimate", "fetch", "bookmark", "restore", "stop")
_NEEDS_ARG = {"create-session", "expand", "estimate", "fetch", "restore"}
_NO_ARG = {"continue", "stop"}


class ScriptError(InvalidSpecError):
    pass


@dataclass
class Command:
    lineno: int
    verb: str
    arg: object = None  # parsed JSON argument or restore target string
    expect: str | None = None


@dataclass
class Script:
    dataset: str
    commands: list[Command] = field(default_factory=list)


def parse_script(text: str) -> Script:
    dataset: str | None = None
    commands: list[Command] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        verb, _, rest = line.partition(" ")
        rest = rest.strip()
        if verb == "dataset":
            if dataset is not None:
                raise ScriptError(f"line {lineno}: duplicate dataset directive")
            if not rest:
                raise ScriptError(f"line {lineno}: dataset directive needs a name")
            dataset = rest
        elif verb == "expect":
            if not commands or commands[-1].expect is not None:
                raise ScriptError(f"line {lineno}: expect must follow a command")
            commands[-1].expect = rest
        elif verb in COMMANDS:
            arg: object = None
            if verb == "restore":
                if not rest:
                    raise ScriptError(f"line {lineno}: restore needs a bookmark id or $last")
                arg = rest
            elif rest:
                try:
                    arg = json.loads(rest)
                except json.JSONDecodeError as exc:
                    raise ScriptError(f"line {lineno}: bad JSON argument: {exc}") from exc
            if verb in _NEEDS_ARG and arg is None:
                raise ScriptError(f"line {lineno}: {verb} needs an argument")
            if verb in _NO_ARG and rest:
                raise ScriptError(f"line {lineno}: {verb} takes no argument")
            commands.append(Command(lineno=lineno, verb=verb, arg=arg))
        else:
            raise ScriptError(f"line {lineno}: unknown command {verb!r}")
    if dataset is None:
        raise ScriptError("script never names a dataset")
    return Script(dataset=dataset, commands=commands)


def _compact(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


@dataclass
class ReplayResult:
    commands_run: int = 0
    transcript: list[tuple[Command, str]] = field(default_factory=list)
    failure: str | None = None  # first golden divergence

    @property
    def passed(self) -> bool:
        return self.failure is None


class Replayer:
    """Executes a script against an httpx-compatible client."""

    def __init__(self, http: httpx.Client, script: Script):
        self.http = http
        self.script = script
        self.session_id: str | None = None
        self.last_bookmark: str | None = None
        # Client-side view mirror, merged with set semantics.
        self.vertices: dict[int, str] = {}
        self.edges: dict[int, tuple[str, int, int]] = {}
        self.attrs: dict[tuple[str, int], dict] = {}

    def run(self, *, golden: bool) -> ReplayResult:
        result = ReplayResult()
        for index, cmd in enumerate(self.script.commands, start=1):
            response = self._execute(cmd)
            text = response.content.decode("utf-8")
            result.transcript.append((cmd, text))
            result.commands_run = index
            if golden:
                if cmd.expect is None:
                    result.failure = f"command {index} (line {cmd.lineno}): no expected output recorded"
                    return result
                if cmd.expect != text:
                    result.failure = (
                        f"command {index} (line {cmd.lineno}): divergence\n"
                        f"  expected: {cmd.expect}\n"
                        f"  actual:   {text}"
                    )
                    return result
            if response.status_code < 400:
                self._merge(cmd, json.loads(text))
        return result

    # -- request construction --

    def _execute(self, cmd: Command) -> httpx.Response:
        if cmd.verb == "create-session":
            body = {"dataset": self.script.dataset}
            body.update(cmd.arg)
            response = self.http.post("/api/sessions", content=_compact(body), headers=_JSON_HEADERS)
            return response
        if self.session_id is None:
            raise ScriptError(f"line {cmd.lineno}: {cmd.verb} before create-session")
        sid = self.session_id
        if cmd.verb == "continue":
            return self.http.post(f"/api/sessions/{sid}/continue")
        if cmd.verb == "stop":
            return self.http.post(f"/api/sessions/{sid}/stop")
        if cmd.verb == "expand":
            return self.http.post(f"/api/sessions/{sid}/expand", content=_compact(cmd.arg), headers=_JSON_HEADERS)
        if cmd.verb == "estimate":
            return self.http.post(f"/api/sessions/{sid}/estimate", content=_compact(cmd.arg), headers=_JSON_HEADERS)
        if cmd.verb == "fetch":
            return self.http.post(f"/api/sessions/{sid}/attributes", content=_compact(cmd.arg), headers=_JSON_HEADERS)
        if cmd.verb == "bookmark":
            desc = (cmd.arg or {}).get("description")
            body = {"payload": self._view_payload(), "description": desc}
            return self.http.post(f"/api/sessions/{sid}/bookmarks", content=_compact(body), headers=_JSON_HEADERS)
        if cmd.verb == "restore":
            target = self.last_bookmark if cmd.arg == "$last" else cmd.arg
            if target is None:
                raise ScriptError(f"line {cmd.lineno}: restore $last with no bookmark stored")
            return self.http.post(f"/api/sessions/{sid}/bookmarks/{target}/restore")
        raise ScriptError(f"line {cmd.lineno}: unknown command {cmd.verb!r}")

    def _view_payload(self) -> dict:
        return {
            "vertices": [
                {"id": vid, "type": t, "attrs": self.attrs.get(("vertex", vid), {})}
                for vid, t in sorted(self.vertices.items())
            ],
            "edges": [
                {"id": eid, "type": t, "source": s, "target": g, "attrs": self.attrs.get(("edge", eid), {})}
                for eid, (t, s, g) in sorted(self.edges.items())
            ],
        }

    # -- view merging --

    def _merge(self, cmd: Command, envelope: dict) -> None:
        data = envelope.get("data")
        if cmd.verb == "create-session":
            self.session_id = data["session_id"]
        elif cmd.verb == "continue":
            # Edge matches stay off the canvas until their endpoints are known.
            if data.get("kind") == "match" and data.get("class") == "vertex":
                self.vertices.setdefault(data["id"], data["type"])
        elif cmd.verb == "expand":
            for v in data["vertices"]:
                self.vertices.setdefault(v["id"], v["type"])
            for e in data["edges"]:
                self.edges.setdefault(e["id"], (e["type"], e["source"], e["target"]))
        elif cmd.verb == "fetch":
            for entry in data["values"]:
                self.attrs.setdefault((entry["class"], entry["id"]), {}).update(entry["attrs"])
        elif cmd.verb == "bookmark":
            self.last_bookmark = data["id"]
        elif cmd.verb == "restore":
            payload = data["payload"]
            for v in payload["vertices"]:
                self.vertices.setdefault(v["id"], v["type"])
                if v["attrs"]:
                    self.attrs.setdefault(("vertex", v["id"]), {}).update(v["attrs"])
            for e in payload["edges"]:
                self.edges.setdefault(e["id"], (e["type"], e["source"], e["target"]))
                if e["attrs"]:
                    self.attrs.setdefault(("edge", e["id"]), {}).update(e["attrs"])


def render_script(script: Script, transcript: list[tuple[Command, str]]) -> str:
    """Script text with expect lines filled from an executed transcript."""
    lines = [f"dataset {script.dataset}"]
    for cmd, response in transcript:
        if cmd.verb == "restore":
            lines.append(f"restore {cmd.arg}")
        elif cmd.arg is not None:
            lines.append(f"{cmd.verb} {_compact(cmd.arg)}")
        else:
            lines.append(cmd.verb)
        lines.append(f"expect {response}")
    return "\n".join(lines) + "\n"


_JSON_HEADERS = {"content-type": "application/json"}
