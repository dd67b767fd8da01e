// Browser entry: wires the editor state to DOM controls and a canvas.
// Everything geometric on screen is a service response re-plotted through
// the session's canvas mapping.

import { DesignerApi } from "./api.js";
import {
  canSubmit,
  exportAnnotation,
  scrubFrame,
  submitPreview,
} from "./controller.js";
import { CanvasMapping } from "./mapping.js";
import { buildOverlay } from "./overlay.js";
import {
  addPolylinePoint,
  clearPolyline,
  createEditorState,
  setScrub,
  type Mode,
} from "./state.js";

const IMAGE_W = 576;
const IMAGE_H = 320;
const KEYFRAMES = 32;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el as T;
}

function main(): void {
  const canvas = byId<HTMLCanvasElement>("design-canvas");
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("2d canvas unavailable");

  const api = new DesignerApi(
    new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8731",
  );
  const state = createEditorState(KEYFRAMES);
  const mapping = new CanvasMapping(canvas.width, canvas.height, IMAGE_W, IMAGE_H);

  const modeSelect = byId<HTMLSelectElement>("mode");
  const templateSelect = byId<HTMLSelectElement>("template");
  const radiusInput = byId<HTMLInputElement>("radius");
  const sweptInput = byId<HTMLInputElement>("swept");
  const headingInput = byId<HTMLInputElement>("heading");
  const scrubInput = byId<HTMLInputElement>("scrub");
  const errorList = byId<HTMLUListElement>("errors");
  const statusLine = byId<HTMLSpanElement>("status");
  const frameLabel = byId<HTMLSpanElement>("frame-label");

  function render(): void {
    ctx!.clearRect(0, 0, canvas.width, canvas.height);

    // image area outline
    const [x0, y0] = mapping.toCanvas([0, 0]);
    const [x1, y1] = mapping.toCanvas([IMAGE_W, IMAGE_H]);
    ctx!.strokeStyle = "#555";
    ctx!.strokeRect(x0, y0, x1 - x0, y1 - y0);

    // raw stroke while drawing
    if (state.mode === "draw" && state.polyline.length > 1) {
      ctx!.strokeStyle = "#888";
      ctx!.beginPath();
      for (const [i, p] of state.polyline.entries()) {
        if (i === 0) ctx!.moveTo(p[0], p[1]);
        else ctx!.lineTo(p[0], p[1]);
      }
      ctx!.stroke();
    }

    for (const cmd of buildOverlay(state, mapping)) {
      if (cmd.kind === "path") {
        ctx!.strokeStyle = "#d33";
        ctx!.lineWidth = 2;
        ctx!.beginPath();
        for (const [i, p] of cmd.points.entries()) {
          if (i === 0) ctx!.moveTo(p[0], p[1]);
          else ctx!.lineTo(p[0], p[1]);
        }
        ctx!.stroke();
      } else if (cmd.kind === "polygon") {
        ctx!.fillStyle = "rgba(60, 120, 220, 0.25)";
        ctx!.strokeStyle = "#36c";
        ctx!.beginPath();
        for (const [i, p] of cmd.points.entries()) {
          if (i === 0) ctx!.moveTo(p[0], p[1]);
          else ctx!.lineTo(p[0], p[1]);
        }
        ctx!.closePath();
        ctx!.fill();
        ctx!.stroke();
      } else {
        ctx!.strokeStyle = "#2a2";
        ctx!.beginPath();
        ctx!.moveTo(cmd.from[0], cmd.from[1]);
        ctx!.lineTo(cmd.to[0], cmd.to[1]);
        ctx!.stroke();
        const angle = Math.atan2(cmd.to[1] - cmd.from[1], cmd.to[0] - cmd.from[0]);
        ctx!.beginPath();
        for (const side of [-1, 1]) {
          ctx!.moveTo(cmd.to[0], cmd.to[1]);
          ctx!.lineTo(
            cmd.to[0] - 6 * Math.cos(angle + (side * Math.PI) / 7),
            cmd.to[1] - 6 * Math.sin(angle + (side * Math.PI) / 7),
          );
        }
        ctx!.stroke();
      }
    }

    errorList.replaceChildren(
      ...state.errors.map((msg) => {
        const li = document.createElement("li");
        li.textContent = msg;
        return li;
      }),
    );
    frameLabel.textContent = state.preview
      ? `frame ${scrubFrame(state) + 1}/${state.keyframes}`
      : "no preview";
  }

  async function resubmit(): Promise<void> {
    await submitPreview(state, api, mapping);
    render();
  }

  modeSelect.addEventListener("change", () => {
    state.mode = modeSelect.value as Mode;
    render();
  });

  for (const [input, apply] of [
    [templateSelect, () => (state.params.template = templateSelect.value as "arc" | "s_curve")],
    [radiusInput, () => (state.params.radius = radiusInput.valueAsNumber)],
    [sweptInput, () => (state.params.sweptAngle = (sweptInput.valueAsNumber * Math.PI) / 180)],
    [headingInput, () => (state.params.initialHeading = (headingInput.valueAsNumber * Math.PI) / 180)],
  ] as const) {
    input.addEventListener("input", () => {
      apply();
      if (state.mode === "parametric" && canSubmit(state)) void resubmit();
    });
  }

  scrubInput.addEventListener("input", () => {
    setScrub(state, scrubInput.valueAsNumber); // no service call
    render();
  });

  let drawing = false;
  canvas.addEventListener("pointerdown", (ev) => {
    if (state.mode !== "draw") return;
    drawing = true;
    clearPolyline(state);
    addPolylinePoint(state, [ev.offsetX, ev.offsetY]);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!drawing) return;
    const last = state.polyline[state.polyline.length - 1];
    if (last && Math.hypot(ev.offsetX - last[0], ev.offsetY - last[1]) < 4) return;
    addPolylinePoint(state, [ev.offsetX, ev.offsetY]);
    render();
  });
  canvas.addEventListener("pointerup", () => {
    if (!drawing) return;
    drawing = false;
    void resubmit();
  });

  byId<HTMLButtonElement>("preview").addEventListener("click", () => void resubmit());

  byId<HTMLButtonElement>("sample").addEventListener("click", () => {
    void (async () => {
      const seed = Math.floor(Math.random() * 2 ** 31);
      try {
        const { data } = await api.sampleSpec(seed);
        state.params = {
          template: data.spec.template,
          radius: data.spec.radius,
          sweptAngle: data.spec.swept_angle,
          initialHeading: data.spec.initial_heading,
        };
        radiusInput.value = String(data.spec.radius);
        sweptInput.value = String((data.spec.swept_angle * 180) / Math.PI);
        headingInput.value = String((data.spec.initial_heading * 180) / Math.PI);
        templateSelect.value = data.spec.template;
        state.mode = "parametric";
        modeSelect.value = "parametric";
        await resubmit();
      } catch (err) {
        state.errors = [err instanceof Error ? err.message : String(err)];
        render();
      }
    })();
  });

  byId<HTMLButtonElement>("export").addEventListener("click", () => {
    try {
      const text = exportAnnotation(state); // verbatim service bytes
      const blob = new Blob([text], { type: "application/json" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = "trajectory_annotation.json";
      a.click();
      URL.revokeObjectURL(a.href);
    } catch (err) {
      state.errors = [err instanceof Error ? err.message : String(err)];
      render();
    }
  });

  void api.health().then((ok) => {
    statusLine.textContent = ok ? "service ok" : "service unreachable";
  });

  render();
}

main();
