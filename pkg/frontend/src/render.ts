// DOM/SVG rendering for the three panes. Pure drawing: every region and
// hit comes from the service untouched.

import type { Highlight } from "./state.js";
import { imagePaintings, paneOf, regionBox, textLayerGroups } from "./state.js";
import type { ChoiceInfo, Layout, Painting } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ClickTarget {
  annotation: string;
  region: [number, number][];
}

function shortName(uri: string): string {
  const tail = uri.split(/[/:#]/).filter(Boolean).pop();
  return tail ?? uri;
}

function polygonPoints(region: [number, number][]): string {
  return region.map(([x, y]) => `${x},${y}`).join(" ");
}

function svgEl<K extends keyof SVGElementTagNameMap>(name: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function drawImagePainting(svg: SVGSVGElement, painting: Painting): void {
  const box = regionBox(painting.region);
  const href = painting.bodySegment ? null : painting.body; // crops need tiles the viewer does not have
  if (href && /^https?:/.test(href)) {
    const image = svgEl("image", {
      x: String(box.x),
      y: String(box.y),
      width: String(box.w),
      height: String(box.h),
      href,
    });
    image.addEventListener("error", () => image.remove());
    svg.appendChild(image);
  }
  // placeholder behind/instead of the (often unreachable) image bytes
  const placeholder = svgEl("rect", {
    x: String(box.x),
    y: String(box.y),
    width: String(box.w),
    height: String(box.h),
    class: "image-placeholder",
  });
  svg.insertBefore(placeholder, svg.firstChild);
  const label = svgEl("text", {
    x: String(box.x + 8),
    y: String(box.y + 20),
    class: "image-label",
  });
  label.textContent = shortName(painting.body);
  svg.appendChild(label);
}

export function renderImagePane(
  container: HTMLElement,
  layout: Layout,
  highlight: Highlight | null,
  onClick: (target: ClickTarget | null) => void,
): void {
  container.replaceChildren();
  const svg = svgEl("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    class: "canvas-svg",
  });
  svg.appendChild(
    svgEl("rect", { x: "0", y: "0", width: String(layout.width), height: String(layout.height), class: "canvas-bg" }),
  );
  for (const painting of imagePaintings(layout)) {
    drawImagePainting(svg, painting);
  }
  for (const painting of layout.paintings) {
    const outline = svgEl("polygon", {
      points: polygonPoints(painting.region),
      class: "segment-outline",
      "data-annotation": painting.annotation,
    });
    if (highlight) {
      const lit = highlight.hits.has(painting.annotation) || highlight.annotation === painting.annotation;
      if (lit) {
        outline.classList.add("highlight");
      }
    }
    outline.addEventListener("click", (event) => {
      event.stopPropagation();
      onClick({ annotation: painting.annotation, region: painting.region });
    });
    svg.appendChild(outline);
  }
  if (highlight) {
    const marker = svgEl("rect", {
      x: String(highlight.region.x),
      y: String(highlight.region.y),
      width: String(highlight.region.w),
      height: String(highlight.region.h),
      class: "query-marker",
    });
    svg.appendChild(marker);
  }
  svg.addEventListener("click", () => onClick(null));
  const caption = document.createElement("div");
  caption.className = "canvas-caption";
  caption.textContent = `${layout.label ?? layout.canvas} (${layout.width} x ${layout.height})`;
  container.append(svg, caption);
}

export function renderTextPanes(
  middle: HTMLElement,
  right: HTMLElement,
  layout: Layout,
  highlight: Highlight | null,
  onClick: (target: ClickTarget | null) => void,
): void {
  middle.replaceChildren();
  right.replaceChildren();
  const groups = textLayerGroups(layout);
  groups.forEach((group, index) => {
    const pane = paneOf(index) === "middle" ? middle : right;
    const section = document.createElement("section");
    const heading = document.createElement("h3");
    heading.textContent = group.label ?? (group.layer ? shortName(group.layer) : "(no layer)");
    section.appendChild(heading);
    for (const painting of group.paintings) {
      const span = document.createElement("p");
      span.className = "text-segment";
      span.dataset["annotation"] = painting.annotation;
      span.textContent = painting.bodyText ?? shortName(painting.body);
      if (painting.rotation !== 0) {
        span.classList.add("rotated");
        span.style.transform = `rotate(${painting.rotation}deg)`;
        span.title = `rotated ${painting.rotation} degrees for reading`;
      }
      if (highlight && (highlight.hits.has(painting.annotation) || highlight.annotation === painting.annotation)) {
        span.classList.add("highlight");
      }
      span.addEventListener("click", (event) => {
        event.stopPropagation();
        onClick({ annotation: painting.annotation, region: painting.region });
      });
      section.appendChild(span);
    }
    pane.appendChild(section);
  });
}

export function renderChoices(
  container: HTMLElement,
  choices: ChoiceInfo[],
  onPick: (choice: string, option: string) => void,
): void {
  container.replaceChildren();
  for (const choice of choices) {
    const wrap = document.createElement("label");
    wrap.className = "choice";
    wrap.textContent = shortName(choice.id) + " ";
    const select = document.createElement("select");
    for (const option of choice.options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = shortName(option);
      el.selected = option === choice.selected;
      select.appendChild(el);
    }
    select.addEventListener("change", () => onPick(choice.id, select.value));
    wrap.appendChild(select);
    container.appendChild(wrap);
  }
}

export function renderBanner(container: HTMLElement, message: string | null, onRetry: (() => void) | null): void {
  container.replaceChildren();
  if (message === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  const text = document.createElement("span");
  text.textContent = message;
  container.appendChild(text);
  if (onRetry) {
    const button = document.createElement("button");
    button.textContent = "retry";
    button.addEventListener("click", onRetry);
    container.appendChild(button);
  }
}
