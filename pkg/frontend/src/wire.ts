// Wire types mirroring the posetraj service JSON bodies. Field names are
// snake_case because they are the service's names, not ours.

export type TemplateName = "arc" | "s_curve";

export interface SpecDoc {
  template: TemplateName;
  start: [number, number];
  initial_heading: number;
  radius: number;
  swept_angle: number;
  steps: number;
  keyframes: number;
}

export interface PreviewKeyframe {
  frame_index: number; // 1-based
  rotation: [number, number, number, number]; // unit quaternion, w first
  translation: [number, number, number];
  center_pixel: [number, number];
  /** 8 corners in binary order: bit0 -> +x, bit1 -> +y, bit2 -> +z. */
  bbox_corners_pixel: [number, number][];
  heading: number; // world yaw, radians
}

export interface PreviewResponse {
  schema_version: number;
  keyframes: PreviewKeyframe[];
}

export interface PreviewRequest {
  spec?: SpecDoc;
  polyline?: [number, number][]; // image pixels
  keyframes?: number;
  box_extents?: [number, number, number];
}

export interface SampleResponse {
  schema_version: number;
  spec: SpecDoc;
}

export interface RectBody {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface DragRequest {
  rect: RectBody;
  n: number;
  seed: number;
  centers?: [number, number][];
}

export interface DragResponse {
  schema_version: number;
  initial_points: [number, number][];
  tracks: [number, number][][];
}

export interface FieldError {
  loc: string[];
  msg: string;
}

export interface ErrorBody {
  error: {
    code: string;
    message: string;
    fields?: FieldError[];
  };
}
