export type Pt = [number, number];

/**
 * Affine canvas<->image pixel mapping, computed once per session.
 *
 * Uniform scale (aspect preserved) with the image letterboxed inside the
 * canvas. This is the only coordinate arithmetic the UI performs — every
 * pose / projection number on screen comes from the service.
 */
export class CanvasMapping {
  readonly scale: number;
  readonly offsetX: number;
  readonly offsetY: number;

  constructor(
    canvasWidth: number,
    canvasHeight: number,
    readonly imageWidth: number,
    readonly imageHeight: number,
  ) {
    if (
      !(canvasWidth > 0 && canvasHeight > 0 && imageWidth > 0 && imageHeight > 0)
    ) {
      throw new RangeError("mapping dimensions must be positive");
    }
    this.scale = Math.min(canvasWidth / imageWidth, canvasHeight / imageHeight);
    this.offsetX = (canvasWidth - imageWidth * this.scale) / 2;
    this.offsetY = (canvasHeight - imageHeight * this.scale) / 2;
  }

  toImage(p: Pt): Pt {
    return [(p[0] - this.offsetX) / this.scale, (p[1] - this.offsetY) / this.scale];
  }

  toCanvas(p: Pt): Pt {
    return [p[0] * this.scale + this.offsetX, p[1] * this.scale + this.offsetY];
  }
}
