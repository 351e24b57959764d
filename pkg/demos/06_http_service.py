"""Drive the HTTP service end to end: boot, ingest frames, command, stream.

Run:  python3 demos/06_http_service.py
"""

import json
import threading
import time
import urllib.request

import uvicorn

from rescueaid.groups import CANONICAL_UNITS, VitalKind
from rescueaid.service.config import ServiceConfig
from rescueaid.service.core import ServiceCore
from rescueaid.service.demo import train_demo_bundle
from rescueaid.service.http import build_app
from rescueaid.vitals.framing import encode_frame
from rescueaid.vitals.samples import VitalSample

PORT = 8731
BASE = f"http://127.0.0.1:{PORT}"

print("training desk-scale model...")
core = ServiceCore(config=ServiceConfig(listen_port=PORT), bundle=train_demo_bundle())
server = uvicorn.Server(uvicorn.Config(build_app(core), host="127.0.0.1", port=PORT, log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
print(f"service up at {BASE}")


def post(path, payload=None, raw=None):
    data = raw if raw is not None else json.dumps(payload or {}).encode()
    request = urllib.request.Request(BASE + path, data=data, method="POST")
    if raw is None:
        request.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


session = post("/sessions", {"language": "en"})
session_id = session["session_id"]
print("session:", session_id, "provisional group:", session["recommendation"]["active_group"])

# stream a burst of respiratory-pattern vitals through the frame relay
frames = b""
for kind, value in {VitalKind.SPO2: 82.0, VitalKind.RESP_RATE: 29.0, VitalKind.HEART_RATE: 95.0}.items():
    frames += encode_frame(VitalSample(device_id="demo", kind=kind, value=value, unit=CANONICAL_UNITS[kind], at=0))
print("ingest:", post("/ingest", raw=frames))
time.sleep(0.4)

recommendation = json.loads(urllib.request.urlopen(f"{BASE}/sessions/{session_id}/recommendation").read())
print("recommendation:", recommendation["recommendation"]["active_group"],
      "actionable:", recommendation["recommendation"]["actionable"])

confirmed = post(f"/sessions/{session_id}/confirm", {"node_id": "f_assess"})
print("pending after confirm:", confirmed["recommendation"]["pending"])
post(f"/sessions/{session_id}/answer", {"question_id": "q_airway_clear", "value": "yes"})

# close, then replay the whole event stream over SSE
urllib.request.urlopen(urllib.request.Request(f"{BASE}/sessions/{session_id}", method="DELETE"))
with urllib.request.urlopen(f"{BASE}/sessions/{session_id}/events?from=0") as stream:
    kinds = []
    for line in stream:
        line = line.decode().strip()
        if line.startswith("event: "):
            kinds.append(line[len("event: ") :])
print("event stream:", " ".join(kinds))

server.should_exit = True
thread.join(timeout=5)
core.shutdown()
print("done")
