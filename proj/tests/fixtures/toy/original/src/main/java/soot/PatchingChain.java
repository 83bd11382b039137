package soot;

import java.util.ArrayList;
import java.util.List;
import soot.util.Chain;

public class PatchingChain {
  protected final Chain<Unit> innerChain;

  public PatchingChain(Chain<Unit> innerChain) {
    this.innerChain = innerChain;
  }

  /** Returns the unit boxes that point into this chain. */
  public List<UnitBox> getUnitBoxes() {
    // collect the boxes of every unit in order
    List<UnitBox> boxes = new ArrayList<UnitBox>();
    for (Unit unit : innerChain) {
      boxes.addAll(unit.getUnitBoxes());
    }
    return boxes;
  }

  /** Inserts a unit before the given point and redirects jumps to it. */
  public void insertBefore(Unit toInsert, Unit point) {
    // jumps that targeted the point now reach the inserted unit
    point.redirectJumpsToThisTo(toInsert);
    innerChain.insertBefore(toInsert, point);
  }

  /** Number of units in the chain. */
  public int size() {
    int count = innerChain.size();
    return count;
  }
}
