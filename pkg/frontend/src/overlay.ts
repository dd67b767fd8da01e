import type { CanvasMapping, Pt } from "./mapping.js";
import { scrubFrame } from "./controller.js";
import type { EditorState } from "./state.js";
import type { PreviewKeyframe } from "./wire.js";

export type DrawCommand =
  | { kind: "path"; points: Pt[] }
  | { kind: "polygon"; points: Pt[] }
  | { kind: "arrow"; from: Pt; to: Pt };

// ground-face corners (z bit clear) walked as a closed quad
const FOOT_ORDER = [0, 1, 3, 2];

export function groundPolygon(frame: PreviewKeyframe): Pt[] {
  return FOOT_ORDER.map((i) => {
    const c = frame.bbox_corners_pixel[i];
    if (c === undefined) throw new Error("preview frame is missing bbox corners");
    return c;
  });
}

const ARROW_LEN = 18; // canvas px

/**
 * Pure view model: the path through all frame centers, the bbox footprint
 * polygon at the scrubbed frame, and one heading arrow per frame pointing
 * at the next center. Only service numbers, mapped to canvas coordinates.
 */
export function buildOverlay(
  state: EditorState,
  mapping: CanvasMapping,
): DrawCommand[] {
  const out: DrawCommand[] = [];
  if (state.preview === null) return out;
  const frames = state.preview.response.keyframes;
  if (frames.length === 0) return out;

  out.push({
    kind: "path",
    points: frames.map((f) => mapping.toCanvas(f.center_pixel)),
  });

  const idx = Math.min(scrubFrame(state), frames.length - 1);
  const current = frames[idx];
  if (current !== undefined) {
    out.push({
      kind: "polygon",
      points: groundPolygon(current).map((p) => mapping.toCanvas(p)),
    });
  }

  for (let i = 0; i < frames.length; i++) {
    // direction toward the next center; the last frame reuses its inbound one
    const a = frames[Math.min(i, frames.length - 2)];
    const b = frames[Math.min(i + 1, frames.length - 1)];
    const here = frames[i];
    if (a === undefined || b === undefined || here === undefined) continue;
    const from = mapping.toCanvas(here.center_pixel);
    const dx = b.center_pixel[0] - a.center_pixel[0];
    const dy = b.center_pixel[1] - a.center_pixel[1];
    const len = Math.hypot(dx, dy);
    if (len < 1e-9) continue; // stationary: no meaningful arrow
    out.push({
      kind: "arrow",
      from,
      to: [from[0] + (dx / len) * ARROW_LEN, from[1] + (dy / len) * ARROW_LEN],
    });
  }
  return out;
}
