import {
  DesignerApi,
  RequestCancelled,
  ServiceError,
  type ApiResult,
} from "./api.js";
import type { CanvasMapping } from "./mapping.js";
import {
  applyErrors,
  applyPreview,
  type EditorState,
} from "./state.js";
import type { DragRequest, DragResponse, PreviewRequest } from "./wire.js";

/** Dense curve resolution sent with parametric specs. */
export const DENSE_STEPS = 200;

export function canSubmit(state: EditorState): boolean {
  if (state.mode === "draw") return state.polyline.length >= 2;
  const p = state.params;
  return (
    p.radius > 0 &&
    Number.isFinite(p.sweptAngle) &&
    Number.isFinite(p.initialHeading)
  );
}

export function buildPreviewRequest(
  state: EditorState,
  mapping: CanvasMapping,
): PreviewRequest {
  if (state.mode === "draw") {
    return {
      polyline: state.polyline.map((p) => mapping.toImage(p)),
      keyframes: state.keyframes,
    };
  }
  const p = state.params;
  return {
    spec: {
      template: p.template,
      start: [0, 0],
      initial_heading: p.initialHeading,
      radius: p.radius,
      swept_angle: p.sweptAngle,
      steps: DENSE_STEPS,
      keyframes: state.keyframes,
    },
  };
}

/**
 * Round-trip the current design through the service. Failures always land
 * in state.errors (never silent); a submission superseded by a newer one
 * resolves false without touching the state.
 */
export async function submitPreview(
  state: EditorState,
  api: DesignerApi,
  mapping: CanvasMapping,
): Promise<boolean> {
  if (!canSubmit(state)) {
    applyErrors(state, [
      state.mode === "draw"
        ? "draw at least two points before previewing"
        : "spec parameters are out of range",
    ]);
    return false;
  }
  try {
    const result = await api.preview(buildPreviewRequest(state, mapping));
    applyPreview(state, { response: result.data, rawText: result.rawText });
    return true;
  } catch (err) {
    if (err instanceof RequestCancelled) return false;
    if (err instanceof ServiceError) {
      applyErrors(state, err.inlineMessages());
      return false;
    }
    applyErrors(state, [err instanceof Error ? err.message : String(err)]);
    return false;
  }
}

/** Drag-point sets ride the same inline-error path as previews. */
export async function requestDragPoints(
  state: EditorState,
  api: DesignerApi,
  body: DragRequest,
): Promise<ApiResult<DragResponse> | null> {
  try {
    const result = await api.sampleDrag(body);
    state.errors = [];
    return result;
  } catch (err) {
    if (err instanceof ServiceError) {
      applyErrors(state, err.inlineMessages());
      return null;
    }
    applyErrors(state, [err instanceof Error ? err.message : String(err)]);
    return null;
  }
}

/** Scrub is pure client side: nearest keyframe index for s in [0, 1]. */
export function scrubFrame(state: EditorState): number {
  return Math.round(state.scrub * (state.keyframes - 1));
}

/** The annotation is the service response, verbatim. */
export function exportAnnotation(state: EditorState): string {
  if (state.preview === null) {
    throw new Error("nothing to export: run a preview first");
  }
  return state.preview.rawText;
}
