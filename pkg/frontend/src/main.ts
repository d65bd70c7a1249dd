/**
 * Browser shell: wires the view model to a websocket, the keyboard, the
 * audio engine, and a small DOM. Everything with logic worth testing
 * lives in the other modules; this file is glue.
 */

import { AudioEngine } from "./audio.js";
import { parseServerMessage, type Action, type Modality } from "./protocol.js";
import { SessionViewModel } from "./session.js";

const KEYMAP: Record<string, Action> = {
  ArrowUp: "forward",
  ArrowLeft: "turn_left",
  ArrowRight: "turn_right",
  " ": "stop",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const vm = new SessionViewModel();
  const audio = new AudioEngine();
  const url = `ws://${location.host}/session`;
  const ws = new WebSocket(url);

  const status = el<HTMLElement>("status");
  const barsBox = el<HTMLElement>("bars");
  const voicesBox = el<HTMLElement>("voices");
  const statsBox = el<HTMLElement>("stats");
  const pathSel = el<HTMLSelectElement>("path");
  const modalitySel = el<HTMLSelectElement>("modality");
  const seedInput = el<HTMLInputElement>("seed");

  function send(msg: unknown): void {
    if (ws.readyState === WebSocket.OPEN) ws.send(JSON.stringify(msg));
  }

  function draw(): void {
    const m = vm.render();
    status.textContent =
      m.phase === "running"
        ? `tick ${m.tick} · ${m.elapsedS.toFixed(1)} s · collisions ${m.noc}` +
          (m.collided ? " · BUMP" : "")
        : m.phase === "finished"
          ? `trial over · ${m.reachedGoal ? "goal reached" : "timed out"} · collisions ${m.noc}`
          : m.phase === "error"
            ? `error: ${m.errorMessage}`
            : "press Start";
    status.classList.toggle("bump", m.collided);

    voicesBox.innerHTML = "";
    if (m.voices !== null) {
      for (const v of m.voices) {
        const row = document.createElement("div");
        row.className = "voice";
        row.style.setProperty("--level", String(v.gain * m.voices.length));
        row.textContent = `${v.frequency.toFixed(0)} Hz`;
        voicesBox.appendChild(row);
      }
    }

    barsBox.innerHTML = "";
    if (m.bars !== null) {
      for (const b of m.bars) {
        const bar = document.createElement("div");
        bar.className = "bar";
        bar.style.setProperty("--level", String(b.intensity));
        bar.textContent = `${b.steps}`;
        barsBox.appendChild(bar);
      }
    }

    statsBox.innerHTML = "";
    for (const row of m.stats) {
      const tr = document.createElement("tr");
      const label = document.createElement("td");
      label.textContent = `${row.modality} ${row.metric === "tt_s" ? "TT (s)" : "NoC"}`;
      tr.appendChild(label);
      for (const v of row.values) {
        const td = document.createElement("td");
        td.textContent = v === null ? "—" : v.toFixed(2);
        tr.appendChild(td);
      }
      statsBox.appendChild(tr);
    }
  }

  ws.onmessage = (event) => {
    const msg = parseServerMessage(JSON.parse(event.data as string));
    vm.handleMessage(msg);
    if (msg.type === "state" && msg.feedback.kind === "audio") {
      audio.update(msg.feedback);
    }
    if (msg.type !== "state") audio.silence();
    draw();
  };
  ws.onclose = () => {
    status.textContent = "disconnected";
  };

  el<HTMLButtonElement>("start").onclick = () => {
    send(
      vm.start(
        Number(pathSel.value),
        modalitySel.value as Modality,
        Number(seedInput.value) || 0
      )
    );
    draw();
  };

  document.addEventListener("keydown", (event) => {
    const action = KEYMAP[event.key];
    if (action === undefined) return;
    event.preventDefault();
    const msg = vm.press(action);
    if (msg !== null) send(msg);
  });
}

main();
