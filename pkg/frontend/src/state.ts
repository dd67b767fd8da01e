import type { PreviewResponse, TemplateName } from "./wire.js";
import type { Pt } from "./mapping.js";

export type Mode = "draw" | "parametric";

export interface SpecParams {
  template: TemplateName;
  radius: number;
  sweptAngle: number; // signed, radians
  initialHeading: number; // radians
}

export interface PreviewSnapshot {
  response: PreviewResponse;
  /** Verbatim response text; the export button writes exactly this. */
  rawText: string;
}

export interface EditorState {
  mode: Mode;
  /** Draw-mode stroke, canvas pixels. */
  polyline: Pt[];
  params: SpecParams;
  /** Scrub position s in [0, 1]. */
  scrub: number;
  /** Configured keyframe count; preview responses must agree. */
  keyframes: number;
  preview: PreviewSnapshot | null;
  /** Inline messages shown next to the canvas; empty means clean. */
  errors: string[];
}

export function createEditorState(keyframes = 32): EditorState {
  return {
    mode: "parametric",
    polyline: [],
    params: {
      template: "arc",
      radius: 1.25,
      sweptAngle: Math.PI * 0.75,
      initialHeading: 0,
    },
    scrub: 0,
    keyframes,
    preview: null,
    errors: [],
  };
}

export function addPolylinePoint(state: EditorState, p: Pt): void {
  state.polyline.push(p);
}

export function clearPolyline(state: EditorState): void {
  state.polyline = [];
}

export function setScrub(state: EditorState, s: number): void {
  state.scrub = Math.min(1, Math.max(0, s));
}

/**
 * Install a preview response, enforcing the keyframe-count invariant: a
 * response with the wrong number of frames means the request and the
 * session config disagree, and scrubbing math would silently be wrong.
 */
export function applyPreview(state: EditorState, snap: PreviewSnapshot): void {
  const got = snap.response.keyframes.length;
  if (got !== state.keyframes) {
    throw new Error(
      `service returned ${got} keyframes, session is configured for ${state.keyframes}`,
    );
  }
  state.preview = snap;
  state.errors = [];
}

export function applyErrors(state: EditorState, messages: string[]): void {
  state.errors = messages;
}
