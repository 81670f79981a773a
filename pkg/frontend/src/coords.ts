/** Display <-> image coordinate mapping under integer zoom and pan.
 *
 * The viewport renders image pixel (r, c) as a zoom x zoom block whose
 * top-left display pixel is (r * zoom - panR, c * zoom - panC). Mapping a
 * display position back picks the block it falls in, so any click inside a
 * rendered pixel exports exactly that pixel at every zoom level.
 */

export interface Viewport {
  zoom: number; // integer >= 1, nearest-neighbor scaling
  panR: number;
  panC: number;
}

export function displayToImage(
  dispR: number,
  dispC: number,
  view: Viewport,
): [number, number] {
  return [
    Math.floor((dispR + view.panR) / view.zoom),
    Math.floor((dispC + view.panC) / view.zoom),
  ];
}

export function imageToDisplay(
  imgR: number,
  imgC: number,
  view: Viewport,
): [number, number] {
  return [imgR * view.zoom - view.panR, imgC * view.zoom - view.panC];
}

export function clampViewport(
  view: Viewport,
  imageH: number,
  imageW: number,
  viewH: number,
  viewW: number,
): Viewport {
  const zoom = Math.max(1, Math.round(view.zoom));
  const maxPanR = Math.max(0, imageH * zoom - viewH);
  const maxPanC = Math.max(0, imageW * zoom - viewW);
  return {
    zoom,
    panR: Math.min(Math.max(0, view.panR), maxPanR),
    panC: Math.min(Math.max(0, view.panC), maxPanC),
  };
}
