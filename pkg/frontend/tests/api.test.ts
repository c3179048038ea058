import { describe, expect, it } from "vitest";

import { ServiceClient, ServiceError, layoutFromScx } from "../src/api.js";
import type { AlignResult } from "../src/types.js";
import { BASE, enc, fixture, stubFetch } from "./helpers.js";

const CANVAS = "urn:sl:canvas:p1";

describe("layoutFromScx", () => {
  it("unwraps the letter layout", () => {
    const layout = layoutFromScx(fixture("letter_layout.json"));
    expect(layout.canvas).toBe(CANVAS);
    expect(layout.width).toBe(1000);
    expect(layout.height).toBe(1400);
    expect(layout.paintings).toHaveLength(9);
    expect(layout.layers.map((l) => l.id)).toEqual([
      "urn:sl:ImgLyr",
      "urn:sl:Txt1Lyr",
      "urn:sl:Txt2Lyr",
    ]);
    expect(layout.choices).toHaveLength(1);
    expect(layout.choices[0].options).toHaveLength(2);
  });

  it("keeps paintings in z-order with inline text", () => {
    const layout = layoutFromScx(fixture("letter_layout.json"));
    const orders = layout.paintings.map((p) => p.zOrder);
    expect(orders).toEqual([...orders].sort((a, b) => a - b));
    const line1 = layout.paintings.find((p) => p.annotation === "urn:sl:anno:line1")!;
    expect(line1.bodyText).toContain("Seer beminde");
    expect(line1.region).toEqual([
      [100, 100],
      [900, 100],
      [900, 200],
      [100, 200],
    ]);
  });

  it("rejects documents without a layout node", () => {
    expect(() => layoutFromScx({ resources: [] })).toThrow(/FlattenedLayout/);
  });
});

describe("ServiceClient", () => {
  it("fetches and unwraps layouts", async () => {
    const fetchFn = stubFetch({
      [`${BASE}/canvas/${enc(CANVAS)}/layout`]: fixture("letter_layout.json"),
    });
    const client = new ServiceClient(BASE, fetchFn);
    const layout = await client.layout(CANVAS, {});
    expect(layout.paintings).toHaveLength(9);
  });

  it("encodes selections as select params", async () => {
    const url =
      `${BASE}/canvas/${enc("urn:fl:canvas:p1")}/layout?select=` +
      enc("urn:fl:choice:fold=urn:fl:zone:address-folded");
    const fetchFn = stubFetch({ [url]: fixture("folded_layout_folded.json") });
    const client = new ServiceClient(BASE, fetchFn);
    const layout = await client.layout("urn:fl:canvas:p1", {
      "urn:fl:choice:fold": "urn:fl:zone:address-folded",
    });
    expect(layout.paintings.map((p) => p.annotation)).toEqual(["urn:fl:anno:base-img"]);
    expect(fetchFn.calls).toEqual([url]);
  });

  it("turns error bodies into ServiceError", async () => {
    const client = new ServiceClient(BASE, stubFetch({}));
    await expect(client.layout("urn:none", {})).rejects.toBeInstanceOf(ServiceError);
  });

  it("fetches alignment results", async () => {
    const url = `${BASE}/canvas/${enc(CANVAS)}/align?x=100&y=100&w=800&h=100&minFraction=0`;
    const fetchFn = stubFetch({ [url]: fixture("letter_align_line1.json") });
    const client = new ServiceClient(BASE, fetchFn);
    const result: AlignResult = await client.align(CANVAS, { x: 100, y: 100, w: 800, h: 100 });
    expect(result.groups.map((g) => g.layer)).toEqual([
      "urn:sl:ImgLyr",
      "urn:sl:Txt1Lyr",
      "urn:sl:Txt2Lyr",
    ]);
  });
});
