import { describe, expect, it } from "vitest";

import { quarterOf, shiftAnchor, ViewState } from "../src/state";

describe("quarter selection", () => {
  it("maps any day to its quarter boundaries", () => {
    expect(quarterOf("2014-03-05")).toEqual({ start: "2014-01-01", end: "2014-03-31" });
    expect(quarterOf("2014-04-01")).toEqual({ start: "2014-04-01", end: "2014-06-30" });
    expect(quarterOf("2014-11-20")).toEqual({ start: "2014-10-01", end: "2014-12-31" });
    expect(quarterOf("2016-02-29")).toEqual({ start: "2016-01-01", end: "2016-03-31" });
  });
});

describe("anchor shifting", () => {
  it("moves by quarters and years", () => {
    expect(shiftAnchor("2014-02-10", "quarter", 1)).toBe("2014-05-15");
    expect(shiftAnchor("2014-02-10", "quarter", -1)).toBe("2013-11-15");
    expect(shiftAnchor("2014-02-10", "year", 1)).toBe("2015-02-15");
  });
});

describe("selection chain", () => {
  it("clears downstream selections when upstream changes", () => {
    const state = new ViewState();
    state.selectRun("r1");
    state.selectGroup("g1");
    state.selectRpt("i1");
    expect(state.selectionChainValid).toBe(true);

    state.selectRun("r2");
    expect(state.groupId).toBeNull();
    expect(state.rptId).toBeNull();
    expect(state.selectionChainValid).toBe(true);

    state.selectGroup("g2");
    state.selectRpt("i2");
    state.selectGroup("g3");
    expect(state.rptId).toBeNull();
  });

  it("keeps selections when re-selecting the same run", () => {
    const state = new ViewState();
    state.selectRun("r1");
    state.selectGroup("g1");
    state.selectRun("r1");
    expect(state.groupId).toBe("g1");
  });

  it("refuses selections without their parent", () => {
    const state = new ViewState();
    expect(() => state.selectGroup("g1")).toThrow();
    state.selectRun("r1");
    expect(() => state.selectRpt("i1")).toThrow();
  });
});
